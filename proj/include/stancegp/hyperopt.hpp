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

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "stancegp/gpc.hpp"
#include "stancegp/kernels.hpp"

namespace stancegp {

enum class KernelFamily { Linear, LinearArd, Icm, IcmArd };

std::string_view family_name(KernelFamily family);
std::optional<KernelFamily> parse_family(std::string_view name);
constexpr bool family_is_icm(KernelFamily f) { return f == KernelFamily::Icm || f == KernelFamily::IcmArd; }
constexpr bool family_is_ard(KernelFamily f) { return f == KernelFamily::LinearArd || f == KernelFamily::IcmArd; }

struct Bounds {
    double lo;
    double hi;
};

struct OptimizerConfig {
    int restarts = 3;
    int max_evals = 200;       // per restart
    Bounds log_bounds{-4.0, 4.0};  // log-space, for variance, kappa and ARD entries
    Bounds v_bounds{-3.0, 3.0};    // linear-space, for the entries of v
    double tolerance = 1e-3;   // simplex stops when its objective spread drops below this
    std::uint64_t seed = 0;

    // ARD stage: coordinate passes over per-feature log-variances, each
    // coordinate a golden-section search with this many evaluations.
    int ard_passes = 2;
    int ard_coord_evals = 8;

    EPConfig ep;

    void validate() const;
};

/// Binary problem: targets are +1 / -1; tasks are 0 when single-task.
struct BinaryDataset {
    std::vector<TaskedInput> inputs;
    std::vector<double> targets;
    std::size_t dims = 0;
    std::size_t num_tasks = 1;

    void validate() const;
};

/// Training Gram with the default relative jitter on the diagonal, built the
/// same way for fitting, evaluation, and reloading persisted models.
struct TrainingGram {
    Eigen::MatrixXd gram;
    double jitter = 0.0;
};
TrainingGram build_training_gram(const KernelEvaluator& evaluator);

/// EP fit at fixed hyperparameters.
struct FixedFit {
    TrainingGram gram;
    EPApproximation approx;
};
FixedFit fit_fixed(const BinaryDataset& data, const KernelParams& params, const EPConfig& ep);

struct TraceEntry {
    std::size_t index = 0;
    int restart = 0;            // -1 for ARD coordinate evaluations
    std::string stage;          // "simplex" or "ard"
    std::vector<double> params; // natural scale; ARD entries are {feature, variance}
    double log_evidence = 0.0;
    bool failed = false;
};

struct OptimizationResult {
    KernelParams params;
    double log_evidence = 0.0;
    std::vector<TraceEntry> trace;
};

/// Maximizes the EP log evidence over the hyperparameters of `family`.
/// Positive parameters are searched in log space. Restart 0 starts from
/// variance = kappa = 1, v = 1; further restarts start from seeded uniform
/// draws inside the bounds. ARD families first fit the scalar family, then
/// refine per-feature variances coordinate-wise.
OptimizationResult optimize_evidence(const BinaryDataset& data, KernelFamily family,
                                     const OptimizerConfig& cfg);

/// Tab-separated trace: index, stage, restart, log_evidence, params (comma-joined).
void write_trace_tsv(std::ostream& out, const OptimizationResult& result);

}  // namespace stancegp
