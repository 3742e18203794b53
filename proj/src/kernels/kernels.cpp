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

#include <string>

#include "stancegp/kernels.hpp"
#include "stancegp/simd.hpp"

namespace stancegp {

void LinearKernelParams::validate(std::size_t dims) const {
    if (!(variance > 0.0)) throw UsageError("linear kernel variance must be positive");
    if (is_ard()) {
        if (ard_variances.size() != dims) {
            throw UsageError("ARD variances: expected " + std::to_string(dims) + " entries, got " +
                             std::to_string(ard_variances.size()));
        }
        for (double a : ard_variances) {
            if (!(a > 0.0)) throw UsageError("ARD variances must be positive");
        }
    }
}

void CoregionalizationParams::validate() const {
    if (kappa.empty()) throw UsageError("coregionalization needs at least one task");
    if (kappa.size() != v.size()) throw UsageError("kappa and v must have equal length");
    for (double k : kappa) {
        if (!(k >= 0.0)) throw UsageError("kappa entries must be nonnegative");
    }
}

double linear_kernel(const SparseFeatureVector& x, const SparseFeatureVector& x2,
                     const LinearKernelParams& p) {
    if (x.dims() != x2.dims()) {
        throw UsageError("linear kernel: dimension mismatch (" + std::to_string(x.dims()) + " vs " +
                         std::to_string(x2.dims()) + ")");
    }
    p.validate(x.dims());
    if (!p.is_ard()) return p.variance * sparse_dot(x, x2);

    const auto ia = x.indices();
    const auto ib = x2.indices();
    const auto va = x.values();
    const auto vb = x2.values();
    double sum = 0.0;
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < ia.size() && j < ib.size()) {
        if (ia[i] < ib[j]) {
            ++i;
        } else if (ib[j] < ia[i]) {
            ++j;
        } else {
            sum += p.ard_variances[ia[i]] * (va[i] * vb[j]);  // grouped so k(a, b) == k(b, a) exactly
            ++i;
            ++j;
        }
    }
    return sum;
}

Eigen::MatrixXd coreg_matrix(const CoregionalizationParams& p) {
    p.validate();
    const auto d = static_cast<Eigen::Index>(p.num_tasks());
    Eigen::MatrixXd b(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = i; j < d; ++j) {
            const double vv = p.v[static_cast<std::size_t>(i)] * p.v[static_cast<std::size_t>(j)];
            const double value = (i == j) ? p.kappa[static_cast<std::size_t>(i)] + vv : vv;
            b(i, j) = value;
            b(j, i) = value;
        }
    }
    return b;
}

double icm_kernel(const TaskedInput& a, const TaskedInput& b, const LinearKernelParams& p_data,
                  const CoregionalizationParams& p_coreg) {
    p_coreg.validate();
    const auto d = p_coreg.num_tasks();
    if (a.task >= d || b.task >= d) {
        throw UsageError("task index out of range for " + std::to_string(d) + " tasks");
    }
    const Eigen::MatrixXd bm = coreg_matrix(p_coreg);
    return linear_kernel(a.x, b.x, p_data) * bm(a.task, b.task);
}

// ---------------------------------------------------------------------------

KernelEvaluator::KernelEvaluator(std::span<const TaskedInput> train, KernelParams params,
                                 std::size_t dims)
    : train_(train), params_(std::move(params)), dims_(dims) {
    params_.data.validate(dims_);
    if (params_.coreg) {
        coreg_ = coreg_matrix(*params_.coreg);
    } else {
        coreg_ = Eigen::MatrixXd::Ones(1, 1);
    }
    weights_.assign(dims_, params_.data.variance);
    if (params_.data.is_ard()) weights_ = params_.data.ard_variances;
    for (const auto& input : train_) check(input);
}

void KernelEvaluator::check(const TaskedInput& x) const {
    if (x.x.dims() != dims_) {
        throw UsageError("kernel input has " + std::to_string(x.x.dims()) + " dims, expected " +
                         std::to_string(dims_));
    }
    if (x.task >= static_cast<std::uint32_t>(coreg_.rows())) {
        throw UsageError("task index " + std::to_string(x.task) + " out of range");
    }
}

void KernelEvaluator::scatter(const SparseFeatureVector& x, std::vector<double>& dense) const {
    const auto idx = x.indices();
    const auto val = x.values();
    for (std::size_t k = 0; k < idx.size(); ++k) dense[idx[k]] = weights_[idx[k]] * val[k];
}

double KernelEvaluator::task_factor(std::uint32_t a, std::uint32_t b) const {
    return coreg_(a, b);
}

Eigen::MatrixXd KernelEvaluator::gram(double jitter) const {
    if (jitter < 0.0) throw UsageError("jitter must be nonnegative");
    const auto n = static_cast<Eigen::Index>(train_.size());
    Eigen::MatrixXd g(n, n);
    std::vector<double> dense(dims_, 0.0);
    for (Eigen::Index i = 0; i < n; ++i) {
        const TaskedInput& xi = train_[static_cast<std::size_t>(i)];
        scatter(xi.x, dense);
        for (Eigen::Index j = i; j < n; ++j) {
            const TaskedInput& xj = train_[static_cast<std::size_t>(j)];
            const double data = simd::gather_dot(xj.x.indices(), xj.x.values(), dense);
            const double value = data * task_factor(xi.task, xj.task);
            g(i, j) = value;
            g(j, i) = value;
        }
        g(i, i) += jitter;
        for (std::uint32_t idx : xi.x.indices()) dense[idx] = 0.0;
    }
    return g;
}

Eigen::VectorXd KernelEvaluator::cross(const TaskedInput& x) const {
    check(x);
    std::vector<double> dense(dims_, 0.0);
    scatter(x.x, dense);
    Eigen::VectorXd out(static_cast<Eigen::Index>(train_.size()));
    for (std::size_t i = 0; i < train_.size(); ++i) {
        const TaskedInput& xi = train_[i];
        const double data = simd::gather_dot(xi.x.indices(), xi.x.values(), dense);
        out(static_cast<Eigen::Index>(i)) = data * task_factor(x.task, xi.task);
    }
    return out;
}

double KernelEvaluator::self(const TaskedInput& x) const {
    check(x);
    std::vector<double> dense(dims_, 0.0);
    scatter(x.x, dense);
    return simd::gather_dot(x.x.indices(), x.x.values(), dense) * task_factor(x.task, x.task);
}

double default_jitter(const Eigen::MatrixXd& gram_without_jitter) {
    if (gram_without_jitter.rows() == 0) return 0.0;
    return kRelativeJitter * gram_without_jitter.diagonal().mean();
}

}  // namespace stancegp
