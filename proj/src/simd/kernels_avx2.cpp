// Copyright 2026 The TexNet Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Compiled with -mavx2 -mfma; only reached after a CPUID check.

#include <immintrin.h>

#include "kernels_internal.hpp"

namespace texnet::simd {
namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

// Four adjacent columns per iteration. Mirrors the scalar operation order
// exactly (sub, mul, add; no FMA) so codes are bit-identical.
void lbp_codes_row(const double* image, std::size_t width, std::size_t row, std::size_t col_begin,
                   std::size_t col_end, const LbpTap* taps, std::size_t tap_count,
                   std::uint32_t* codes) {
  const double* center_row = image + row * width;
  std::size_t c = col_begin;
  alignas(32) std::uint64_t lanes[4];
  for (; c + 4 <= col_end; c += 4) {
    const __m256d center = _mm256_loadu_pd(center_row + c);
    __m256i code = _mm256_setzero_si256();
    for (std::size_t p = 0; p < tap_count; ++p) {
      const LbpTap& t = taps[p];
      const double* ptr = image + static_cast<std::ptrdiff_t>(row + t.dy) *
                                      static_cast<std::ptrdiff_t>(width) +
                          static_cast<std::ptrdiff_t>(c) + t.dx;
      __m256d top = _mm256_loadu_pd(ptr);
      const __m256d fx = _mm256_set1_pd(t.fx);
      if (t.fx != 0.0) {
        top = _mm256_add_pd(top, _mm256_mul_pd(fx, _mm256_sub_pd(_mm256_loadu_pd(ptr + 1), top)));
      }
      __m256d v = top;
      if (t.fy != 0.0) {
        const double* q = ptr + width;
        __m256d bot = _mm256_loadu_pd(q);
        if (t.fx != 0.0) {
          bot = _mm256_add_pd(bot, _mm256_mul_pd(fx, _mm256_sub_pd(_mm256_loadu_pd(q + 1), bot)));
        }
        v = _mm256_add_pd(top, _mm256_mul_pd(_mm256_set1_pd(t.fy), _mm256_sub_pd(bot, top)));
      }
      const __m256i ge = _mm256_castpd_si256(_mm256_cmp_pd(v, center, _CMP_GE_OQ));
      code = _mm256_or_si256(code, _mm256_and_si256(ge, _mm256_set1_epi64x(1ll << p)));
    }
    _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), code);
    for (int i = 0; i < 4; ++i) codes[c + i] = static_cast<std::uint32_t>(lanes[i]);
  }
  for (; c < col_end; ++c) {
    const double center = center_row[c];
    std::uint32_t code = 0;
    for (std::size_t p = 0; p < tap_count; ++p) {
      if (scalar_tap_value(image, width, row, c, taps[p]) >= center) code |= 1u << p;
    }
    codes[c] = code;
  }
}

double dot(const double* a, const double* b, std::size_t n) {
  __m256d s0 = _mm256_setzero_pd();
  __m256d s1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    s0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), s0);
    s1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), s1);
  }
  for (; i + 4 <= n; i += 4) {
    s0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), s0);
  }
  double s = hsum(_mm256_add_pd(s0, s1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d a = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(a, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

// Register tile of 4 rows x 8 columns of C, streamed over k.
void gemm(std::size_t m, std::size_t n, std::size_t k, const double* a, std::size_t lda,
          const double* b, std::size_t ldb, double* c, std::size_t ldc) {
  std::size_t i = 0;
  for (; i + 4 <= m; i += 4) {
    std::size_t j = 0;
    for (; j + 8 <= n; j += 8) {
      __m256d c00 = _mm256_loadu_pd(c + (i + 0) * ldc + j), c01 = _mm256_loadu_pd(c + (i + 0) * ldc + j + 4);
      __m256d c10 = _mm256_loadu_pd(c + (i + 1) * ldc + j), c11 = _mm256_loadu_pd(c + (i + 1) * ldc + j + 4);
      __m256d c20 = _mm256_loadu_pd(c + (i + 2) * ldc + j), c21 = _mm256_loadu_pd(c + (i + 2) * ldc + j + 4);
      __m256d c30 = _mm256_loadu_pd(c + (i + 3) * ldc + j), c31 = _mm256_loadu_pd(c + (i + 3) * ldc + j + 4);
      for (std::size_t p = 0; p < k; ++p) {
        const __m256d b0 = _mm256_loadu_pd(b + p * ldb + j);
        const __m256d b1 = _mm256_loadu_pd(b + p * ldb + j + 4);
        __m256d av = _mm256_broadcast_sd(a + (i + 0) * lda + p);
        c00 = _mm256_fmadd_pd(av, b0, c00);
        c01 = _mm256_fmadd_pd(av, b1, c01);
        av = _mm256_broadcast_sd(a + (i + 1) * lda + p);
        c10 = _mm256_fmadd_pd(av, b0, c10);
        c11 = _mm256_fmadd_pd(av, b1, c11);
        av = _mm256_broadcast_sd(a + (i + 2) * lda + p);
        c20 = _mm256_fmadd_pd(av, b0, c20);
        c21 = _mm256_fmadd_pd(av, b1, c21);
        av = _mm256_broadcast_sd(a + (i + 3) * lda + p);
        c30 = _mm256_fmadd_pd(av, b0, c30);
        c31 = _mm256_fmadd_pd(av, b1, c31);
      }
      _mm256_storeu_pd(c + (i + 0) * ldc + j, c00); _mm256_storeu_pd(c + (i + 0) * ldc + j + 4, c01);
      _mm256_storeu_pd(c + (i + 1) * ldc + j, c10); _mm256_storeu_pd(c + (i + 1) * ldc + j + 4, c11);
      _mm256_storeu_pd(c + (i + 2) * ldc + j, c20); _mm256_storeu_pd(c + (i + 2) * ldc + j + 4, c21);
      _mm256_storeu_pd(c + (i + 3) * ldc + j, c30); _mm256_storeu_pd(c + (i + 3) * ldc + j + 4, c31);
    }
    for (; j < n; ++j) {
      for (std::size_t r = i; r < i + 4; ++r) {
        double s = c[r * ldc + j];
        for (std::size_t p = 0; p < k; ++p) s += a[r * lda + p] * b[p * ldb + j];
        c[r * ldc + j] = s;
      }
    }
  }
  for (; i < m; ++i) {
    double* crow = c + i * ldc;
    for (std::size_t p = 0; p < k; ++p) axpy(a[i * lda + p], b + p * ldb, crow, n);
  }
}

}  // namespace

const KernelTable& avx2_kernel_table() {
  static const KernelTable table{"avx2", &lbp_codes_row, &dot, &axpy, &gemm};
  return table;
}

}  // namespace texnet::simd
