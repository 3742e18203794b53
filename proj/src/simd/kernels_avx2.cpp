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

// Compiled with -mavx2 -mfma; only reached through the runtime dispatcher.

#include <immintrin.h>

#include "stancegp/simd.hpp"

namespace stancegp::simd::avx2 {

namespace {

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d swapped = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, swapped));
}

}  // namespace

double dot(std::span<const double> a, std::span<const double> b) {
    const std::size_t n = a.size() < b.size() ? a.size() : b.size();
    const double* pa = a.data();
    const double* pb = b.data();

    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(pa + i), _mm256_loadu_pd(pb + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(pa + i + 4), _mm256_loadu_pd(pb + i + 4), acc1);
    }
    for (; i + 4 <= n; i += 4) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(pa + i), _mm256_loadu_pd(pb + i), acc0);
    }
    double sum = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) {
        sum += pa[i] * pb[i];
    }
    return sum;
}

double gather_dot(std::span<const std::uint32_t> indices,
                  std::span<const double> values,
                  std::span<const double> dense) {
    const std::size_t n = indices.size();
    const std::uint32_t* idx = indices.data();
    const double* val = values.data();
    const double* base = dense.data();

    __m256d acc = _mm256_setzero_pd();
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        // Feature indices are < 2^31 in practice; the signed gather offset is fine.
        const __m128i vidx = _mm_loadu_si128(reinterpret_cast<const __m128i*>(idx + k));
        const __m256d gathered = _mm256_i32gather_pd(base, vidx, 8);
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(val + k), gathered, acc);
    }
    double sum = hsum(acc);
    for (; k < n; ++k) {
        sum += val[k] * base[idx[k]];
    }
    return sum;
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
    const std::size_t n = x.size() < y.size() ? x.size() : y.size();
    const double* px = x.data();
    double* py = y.data();
    const __m256d va = _mm256_set1_pd(alpha);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d r = _mm256_fmadd_pd(va, _mm256_loadu_pd(px + i), _mm256_loadu_pd(py + i));
        _mm256_storeu_pd(py + i, r);
    }
    for (; i < n; ++i) {
        py[i] += alpha * px[i];
    }
}

}  // namespace stancegp::simd::avx2
