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
#include <string_view>

// Data-parallel inner loops used by Gram construction and the EP updates.
//
// Every kernel has a portable scalar reference in `scalar::` and, on x86-64
// builds, an AVX2/FMA variant in `avx2::`. The unqualified entry points
// dispatch once per process to the widest variant the CPU supports. Setting
// STANCEGP_ISA=scalar in the environment pins the scalar path, which is the
// way to get identical floating-point results across machines.

namespace stancegp::simd {

enum class Isa { Scalar, Avx2 };

Isa active_isa();
std::string_view isa_name(Isa isa);

/// True when the AVX2 variants were compiled in and the CPU can run them.
bool avx2_available();

/// sum_i a[i] * b[i]
double dot(std::span<const double> a, std::span<const double> b);

/// sum_k values[k] * dense[indices[k]]; indices must be < dense.size().
double gather_dot(std::span<const std::uint32_t> indices,
                  std::span<const double> values,
                  std::span<const double> dense);

/// y += alpha * x
void axpy(double alpha, std::span<const double> x, std::span<double> y);

namespace scalar {
double dot(std::span<const double> a, std::span<const double> b);
double gather_dot(std::span<const std::uint32_t> indices,
                  std::span<const double> values,
                  std::span<const double> dense);
void axpy(double alpha, std::span<const double> x, std::span<double> y);
}  // namespace scalar

#if defined(STANCEGP_HAVE_AVX2)
namespace avx2 {
double dot(std::span<const double> a, std::span<const double> b);
double gather_dot(std::span<const std::uint32_t> indices,
                  std::span<const double> values,
                  std::span<const double> dense);
void axpy(double alpha, std::span<const double> x, std::span<double> y);
}  // namespace avx2
#endif

}  // namespace stancegp::simd
