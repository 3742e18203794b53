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
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "stancegp/error.hpp"
#include "stancegp/sparse.hpp"

namespace stancegp {

/// k(x, x') = variance * <x, x'>, or sum_i ard_variances[i] * x_i * x'_i when
/// ard_variances is non-empty (the per-feature variances then replace the
/// scalar; larger means more relevant).
struct LinearKernelParams {
    double variance = 1.0;
    std::vector<double> ard_variances;

    bool is_ard() const { return !ard_variances.empty(); }
    /// Throws UsageError unless variance > 0 and every ARD entry is > 0 with
    /// one entry per feature.
    void validate(std::size_t dims) const;
};

/// B = diag(kappa) + v v^T over D tasks.
struct CoregionalizationParams {
    std::vector<double> kappa;
    std::vector<double> v;

    std::size_t num_tasks() const { return kappa.size(); }
    void validate() const;
};

struct TaskedInput {
    SparseFeatureVector x;
    std::uint32_t task = 0;
};

/// Data kernel plus an optional coregionalization over tasks.
struct KernelParams {
    LinearKernelParams data;
    std::optional<CoregionalizationParams> coreg;
};

double linear_kernel(const SparseFeatureVector& x, const SparseFeatureVector& x2,
                     const LinearKernelParams& p);

Eigen::MatrixXd coreg_matrix(const CoregionalizationParams& p);

double icm_kernel(const TaskedInput& a, const TaskedInput& b, const LinearKernelParams& p_data,
                  const CoregionalizationParams& p_coreg);

/// Gram matrix of an arbitrary symmetric kernel; the upper triangle is
/// evaluated and mirrored so the result is exactly symmetric.
template <class Input, class Kernel>
Eigen::MatrixXd gram(std::span<const Input> inputs, Kernel&& kernel, double jitter) {
    if (jitter < 0.0) throw UsageError("jitter must be nonnegative");
    const auto n = static_cast<Eigen::Index>(inputs.size());
    Eigen::MatrixXd g(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i; j < n; ++j) {
            const double value = kernel(inputs[static_cast<std::size_t>(i)], inputs[static_cast<std::size_t>(j)]);
            g(i, j) = value;
            g(j, i) = value;
        }
        g(i, i) += jitter;
    }
    return g;
}

/// Kernel evaluations between one input and a training set, and the Gram over
/// that set, through the vectorized sparse-gather path. Inputs are validated
/// against `params` (dims, task range).
class KernelEvaluator {
public:
    /// `train` must outlive the evaluator.
    KernelEvaluator(std::span<const TaskedInput> train, KernelParams params, std::size_t dims);

    std::size_t size() const { return train_.size(); }
    std::size_t dims() const { return dims_; }
    const KernelParams& params() const { return params_; }

    /// Training Gram with `jitter` added to the diagonal.
    Eigen::MatrixXd gram(double jitter) const;
    /// k(x, train_i) for every training point.
    Eigen::VectorXd cross(const TaskedInput& x) const;
    /// k(x, x).
    double self(const TaskedInput& x) const;

    void check(const TaskedInput& x) const;

private:
    std::span<const TaskedInput> train_;
    KernelParams params_;
    std::size_t dims_ = 0;
    Eigen::MatrixXd coreg_;  // 1x1 [1] when single-task

    // weights_[f] multiplies feature f on one side of the inner product.
    std::vector<double> weights_;

    void scatter(const SparseFeatureVector& x, std::vector<double>& dense) const;
    double task_factor(std::uint32_t a, std::uint32_t b) const;
};

/// 1e-6 times the mean diagonal of a jitter-free Gram.
double default_jitter(const Eigen::MatrixXd& gram_without_jitter);
inline constexpr double kRelativeJitter = 1e-6;

}  // namespace stancegp
