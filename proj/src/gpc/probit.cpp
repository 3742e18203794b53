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

#include <cmath>
#include <numbers>

#include "stancegp/gpc.hpp"

namespace stancegp {

namespace {

constexpr double kTailStart = -30.0;

// 1 - 1/z^2 + 3/z^4 - 15/z^6 + 105/z^8, the asymptotic factor in
// Phi(z) ~ N(z)/(-z) * series(z) for z -> -inf.
double lower_tail_series(double z) {
    const double r = 1.0 / (z * z);
    return 1.0 - r * (1.0 - 3.0 * r * (1.0 - 5.0 * r * (1.0 - 7.0 * r)));
}

}  // namespace

double probit(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double log_probit(double z) {
    if (z >= 0.0) return std::log1p(-0.5 * std::erfc(z / std::numbers::sqrt2));
    if (z > kTailStart) return std::log(0.5 * std::erfc(-z / std::numbers::sqrt2));
    return -0.5 * z * z - std::log(-z) - 0.5 * std::log(2.0 * std::numbers::pi) +
           std::log(lower_tail_series(z));
}

double probit_ratio(double z) {
    if (z > kTailStart) {
        const double pdf = std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
        return pdf / probit(z);
    }
    return -z / lower_tail_series(z);
}

double predict_prob(const LatentPrediction& lp) {
    return probit(lp.mean / std::sqrt(1.0 + lp.variance));
}

}  // namespace stancegp
