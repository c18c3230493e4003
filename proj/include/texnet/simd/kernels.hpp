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

#pragma once

// Data-parallel inner loops. Every kernel has a portable scalar reference and,
// on x86-64, an AVX2/FMA variant; the active table is chosen once at runtime
// from CPUID (override with TEXNET_ISA=scalar).
//
// Equivalence contract:
//   lbp_codes_row  bit-identical across variants (no FMA, same operation order)
//   dot/axpy/gemm  equal up to floating-point reassociation

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace texnet::simd {

// One circular sample, relative to the center pixel. The sample value is
//   top = f(dy, dx) + fx * (f(dy, dx+1) - f(dy, dx))
//   bot = f(dy+1, dx) + fx * (f(dy+1, dx+1) - f(dy+1, dx))
//   v   = top + fy * (bot - top)
// with the terms for fx == 0 or fy == 0 skipped (they vanish exactly).
struct LbpTap {
  int dy = 0;
  int dx = 0;
  double fy = 0.0;
  double fx = 0.0;
};

// Writes codes[c] for c in [col_begin, col_end) of `row`. The caller guarantees
// that every tap of every column in the range stays inside the image.
using LbpRowFn = void (*)(const double* image, std::size_t width, std::size_t row,
                          std::size_t col_begin, std::size_t col_end, const LbpTap* taps,
                          std::size_t tap_count, std::uint32_t* codes);

using DotFn = double (*)(const double* a, const double* b, std::size_t n);
// y += alpha * x
using AxpyFn = void (*)(double alpha, const double* x, double* y, std::size_t n);
// C[m x n] += A[m x k] * B[k x n], all row-major with leading dimensions.
using GemmFn = void (*)(std::size_t m, std::size_t n, std::size_t k, const double* a,
                        std::size_t lda, const double* b, std::size_t ldb, double* c,
                        std::size_t ldc);

struct KernelTable {
  std::string_view name;
  LbpRowFn lbp_codes_row;
  DotFn dot;
  AxpyFn axpy;
  GemmFn gemm;
};

const KernelTable& scalar_kernels();
// nullptr when not compiled in or not supported by this CPU.
const KernelTable* avx2_kernels();

// The table used by the library.
const KernelTable& active();

// Test hook: pins the active table (nullptr restores automatic selection).
void set_active(const KernelTable* table);

}  // namespace texnet::simd
