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

#include <cstdlib>
#include <cstring>

#include "stancegp/simd.hpp"

namespace stancegp::simd {

namespace {

struct KernelTable {
    Isa isa;
    double (*dot)(std::span<const double>, std::span<const double>);
    double (*gather_dot)(std::span<const std::uint32_t>, std::span<const double>,
                         std::span<const double>);
    void (*axpy)(double, std::span<const double>, std::span<double>);
};

bool cpu_has_avx2() {
#if defined(STANCEGP_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

KernelTable select_table() {
    const char* forced = std::getenv("STANCEGP_ISA");
    const bool want_scalar = forced != nullptr && std::strcmp(forced, "scalar") == 0;
#if defined(STANCEGP_HAVE_AVX2)
    if (!want_scalar && cpu_has_avx2()) {
        return {Isa::Avx2, &avx2::dot, &avx2::gather_dot, &avx2::axpy};
    }
#endif
    (void)want_scalar;
    return {Isa::Scalar, &scalar::dot, &scalar::gather_dot, &scalar::axpy};
}

const KernelTable& table() {
    static const KernelTable t = select_table();
    return t;
}

}  // namespace

Isa active_isa() { return table().isa; }

std::string_view isa_name(Isa isa) {
    switch (isa) {
        case Isa::Avx2: return "avx2";
        case Isa::Scalar: return "scalar";
    }
    return "unknown";
}

bool avx2_available() { return cpu_has_avx2(); }

double dot(std::span<const double> a, std::span<const double> b) {
    return table().dot(a, b);
}

double gather_dot(std::span<const std::uint32_t> indices,
                  std::span<const double> values,
                  std::span<const double> dense) {
    return table().gather_dot(indices, values, dense);
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
    table().axpy(alpha, x, y);
}

}  // namespace stancegp::simd
