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

#include "texnet/simd/kernels.hpp"

#include "kernels_internal.hpp"

namespace texnet::simd {
namespace {

inline double tap_value(const double* image, std::size_t width, std::size_t row,
                        std::size_t col, const LbpTap& t) {
  const double* p = image + static_cast<std::ptrdiff_t>(row + t.dy) * static_cast<std::ptrdiff_t>(width) +
                    static_cast<std::ptrdiff_t>(col) + t.dx;
  double top = p[0];
  if (t.fx != 0.0) top = top + t.fx * (p[1] - p[0]);
  if (t.fy == 0.0) return top;
  const double* q = p + width;
  double bot = q[0];
  if (t.fx != 0.0) bot = bot + t.fx * (q[1] - q[0]);
  return top + t.fy * (bot - top);
}

void lbp_codes_row(const double* image, std::size_t width, std::size_t row, std::size_t col_begin,
                   std::size_t col_end, const LbpTap* taps, std::size_t tap_count,
                   std::uint32_t* codes) {
  const double* center_row = image + row * width;
  for (std::size_t c = col_begin; c < col_end; ++c) {
    const double center = center_row[c];
    std::uint32_t code = 0;
    for (std::size_t p = 0; p < tap_count; ++p) {
      if (tap_value(image, width, row, c, taps[p]) >= center) code |= 1u << p;
    }
    codes[c] = code;
  }
}

double dot(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void gemm(std::size_t m, std::size_t n, std::size_t k, const double* a, std::size_t lda,
          const double* b, std::size_t ldb, double* c, std::size_t ldc) {
  for (std::size_t i = 0; i < m; ++i) {
    double* crow = c + i * ldc;
    for (std::size_t p = 0; p < k; ++p) {
      const double aip = a[i * lda + p];
      if (aip == 0.0) continue;
      const double* brow = b + p * ldb;
      for (std::size_t j = 0; j < n; ++j) crow[j] += aip * brow[j];
    }
  }
}

}  // namespace

double scalar_tap_value(const double* image, std::size_t width, std::size_t row,
                        std::size_t col, const LbpTap& tap) {
  return tap_value(image, width, row, col, tap);
}

const KernelTable& scalar_kernels() {
  static const KernelTable table{"scalar", &lbp_codes_row, &dot, &axpy, &gemm};
  return table;
}

}  // namespace texnet::simd
