/*
 * Copyright 2026 The stancegp Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace stancegp::detail {

namespace {

constexpr double kReflect = 1.0;
constexpr double kExpand = 2.0;
constexpr double kContract = 0.5;
constexpr double kShrink = 0.5;

}  // namespace

NelderMeadResult nelder_mead(const std::function<double(std::span<const double>)>& f,
                             std::vector<double> x0, std::span<const double> lo,
                             std::span<const double> hi, const NelderMeadOptions& opts) {
    const std::size_t n = x0.size();
    const auto project = [&](std::vector<double>& x) {
        for (std::size_t i = 0; i < n; ++i) x[i] = std::clamp(x[i], lo[i], hi[i]);
    };

    NelderMeadResult result;
    const auto eval = [&](const std::vector<double>& x) {
        ++result.evals;
        const double v = f(x);
        return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
    };

    project(x0);
    std::vector<std::vector<double>> simplex;
    std::vector<double> values;
    simplex.push_back(x0);
    values.push_back(eval(x0));
    for (std::size_t i = 0; i < n && result.evals < opts.max_evals; ++i) {
        std::vector<double> x = x0;
        // Step away from the nearer bound so the vertex stays distinct.
        x[i] += (x0[i] + opts.initial_step <= hi[i]) ? opts.initial_step : -opts.initial_step;
        project(x);
        simplex.push_back(x);
        values.push_back(eval(x));
    }

    std::vector<std::size_t> order(simplex.size());
    const auto sort_simplex = [&] {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    };

    while (simplex.size() == n + 1 && result.evals < opts.max_evals) {
        sort_simplex();
        const std::size_t best = order.front();
        const std::size_t worst = order.back();
        const std::size_t second_worst = order[order.size() - 2];
        if (std::isfinite(values[worst]) && values[worst] - values[best] < opts.tolerance) break;

        std::vector<double> centroid(n, 0.0);
        for (std::size_t k = 0; k < simplex.size(); ++k) {
            if (k == worst) continue;
            for (std::size_t i = 0; i < n; ++i) centroid[i] += simplex[k][i] / static_cast<double>(n);
        }
        const auto along = [&](double t) {
            std::vector<double> x(n);
            for (std::size_t i = 0; i < n; ++i) x[i] = centroid[i] + t * (simplex[worst][i] - centroid[i]);
            project(x);
            return x;
        };

        std::vector<double> reflected = along(-kReflect);
        const double f_reflected = eval(reflected);
        if (f_reflected < values[best]) {
            if (result.evals >= opts.max_evals) {
                simplex[worst] = reflected;
                values[worst] = f_reflected;
                break;
            }
            std::vector<double> expanded = along(-kExpand);
            const double f_expanded = eval(expanded);
            if (f_expanded < f_reflected) {
                simplex[worst] = std::move(expanded);
                values[worst] = f_expanded;
            } else {
                simplex[worst] = std::move(reflected);
                values[worst] = f_reflected;
            }
            continue;
        }
        if (f_reflected < values[second_worst]) {
            simplex[worst] = std::move(reflected);
            values[worst] = f_reflected;
            continue;
        }
        if (result.evals >= opts.max_evals) break;
        const bool outside = f_reflected < values[worst];
        std::vector<double> contracted = along(outside ? -kContract : kContract);
        const double f_contracted = eval(contracted);
        if (f_contracted < std::min(f_reflected, values[worst])) {
            simplex[worst] = std::move(contracted);
            values[worst] = f_contracted;
            continue;
        }
        if (outside && f_reflected < values[worst]) {
            simplex[worst] = std::move(reflected);
            values[worst] = f_reflected;
        }
        for (std::size_t k = 0; k < simplex.size() && result.evals < opts.max_evals; ++k) {
            if (k == best) continue;
            for (std::size_t i = 0; i < n; ++i) {
                simplex[k][i] = simplex[best][i] + kShrink * (simplex[k][i] - simplex[best][i]);
            }
            values[k] = eval(simplex[k]);
        }
    }

    std::size_t best = 0;
    for (std::size_t k = 1; k < values.size(); ++k) {
        if (values[k] < values[best]) best = k;
    }
    result.x = simplex[best];
    result.value = values[best];
    return result;
}

}  // namespace stancegp::detail
