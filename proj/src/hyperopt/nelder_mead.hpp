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

#pragma once

#include <functional>
#include <span>
#include <vector>

namespace stancegp::detail {

struct NelderMeadOptions {
    int max_evals = 200;
    double tolerance = 1e-3;
    double initial_step = 1.0;
};

struct NelderMeadResult {
    std::vector<double> x;
    double value = 0.0;
    int evals = 0;
};

/// Box-constrained downhill simplex: trial points are projected onto
/// [lo, hi]. `f` may return +inf for infeasible points.
NelderMeadResult nelder_mead(const std::function<double(std::span<const double>)>& f,
                             std::vector<double> x0, std::span<const double> lo,
                             std::span<const double> hi, const NelderMeadOptions& opts);

}  // namespace stancegp::detail
