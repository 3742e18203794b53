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
#include <span>
#include <utility>
#include <vector>

namespace stancegp {

/// Sparse real vector with strictly ascending indices and no stored zeros.
///
/// The featurizers only ever produce nonnegative counts, but the kernels accept
/// any finite values so that synthetic inputs may carry a sign.
class SparseFeatureVector {
public:
    SparseFeatureVector() = default;
    explicit SparseFeatureVector(std::size_t dims) : dims_(dims) {}

    /// Validates and canonicalizes (index, value) pairs: pairs must be strictly
    /// ascending and in range; zero values are dropped. Throws DataError.
    static SparseFeatureVector from_pairs(std::size_t dims,
                                          std::span<const std::pair<std::uint32_t, double>> pairs);
    static SparseFeatureVector from_dense(std::span<const double> dense);

    std::size_t dims() const { return dims_; }
    std::size_t nnz() const { return indices_.size(); }
    std::span<const std::uint32_t> indices() const { return indices_; }
    std::span<const double> values() const { return values_; }

    double l1_norm() const;
    double squared_norm() const;
    std::vector<double> to_dense() const;

    bool operator==(const SparseFeatureVector&) const = default;

private:
    std::size_t dims_ = 0;
    std::vector<std::uint32_t> indices_;
    std::vector<double> values_;
};

/// Sparse dot product by index merge; the reference used by linear_kernel.
double sparse_dot(const SparseFeatureVector& a, const SparseFeatureVector& b);

}  // namespace stancegp
