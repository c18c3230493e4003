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

#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "texnet/lbp.hpp"
#include "texnet/simd/kernels.hpp"

using namespace texnet;

namespace {

std::vector<double> random_vec(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(n);
  for (double& x : v) x = u(rng);
  return v;
}

}  // namespace

TEST_CASE("active table is one of the known variants") {
  const auto& a = simd::active();
  const bool known = &a == &simd::scalar_kernels() || &a == simd::avx2_kernels();
  CHECK(known);
  MESSAGE("active kernels: " << a.name);
}

TEST_CASE("set_active pins and restores") {
  const auto* before = &simd::active();
  simd::set_active(&simd::scalar_kernels());
  CHECK(&simd::active() == &simd::scalar_kernels());
  simd::set_active(nullptr);
  CHECK(&simd::active() == before);
}

TEST_CASE("LBP row kernels are bit-identical across variants") {
  const simd::KernelTable* avx = simd::avx2_kernels();
  if (avx == nullptr) {
    MESSAGE("AVX2 kernels unavailable on this machine; nothing to compare");
    return;
  }
  std::mt19937_64 rng(21);
  for (auto interp : {Interpolation::kNearest, Interpolation::kBilinear}) {
    for (auto [P, R] : {std::pair{8, 1.0}, {8, 2.0}, {16, 2.0}, {24, 3.0}, {6, 1.3}}) {
      LbpConfig cfg;
      cfg.points = P;
      cfg.radius = R;
      cfg.interpolation = interp;
      for (int i = 0; i < 4; ++i) {
        // Odd widths exercise the scalar tail of the vector loop.
        const GrayImage img = i % 2 ? oracle::random_image(rng, 23, 29 + i)
                                    : oracle::random_quantized_image(rng, 23, 29 + i, 3);
        CHECK(compute_code_image_with(img, cfg, simd::scalar_kernels()) ==
              compute_code_image_with(img, cfg, *avx));
      }
    }
  }
}

TEST_CASE("dot, axpy and gemm agree across variants") {
  const simd::KernelTable* avx = simd::avx2_kernels();
  if (avx == nullptr) return;
  const auto& s = simd::scalar_kernels();
  std::mt19937_64 rng(4);
  for (std::size_t n : {0u, 1u, 3u, 4u, 7u, 16u, 33u, 1001u}) {
    const auto a = random_vec(rng, n), b = random_vec(rng, n);
    CHECK(avx->dot(a.data(), b.data(), n) == doctest::Approx(s.dot(a.data(), b.data(), n)).epsilon(1e-12));
    auto y1 = b, y2 = b;
    s.axpy(0.37, a.data(), y1.data(), n);
    avx->axpy(0.37, a.data(), y2.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(y1[i] == doctest::Approx(y2[i]).epsilon(1e-14));
  }
  for (auto [m, n, k] : {std::tuple{1u, 1u, 1u}, {4u, 8u, 5u}, {5u, 9u, 3u}, {16u, 100u, 27u},
                         {33u, 17u, 64u}}) {
    // Operate on sub-blocks of wider buffers to test the leading dimensions.
    const std::size_t lda = k + 2, ldb = n + 3, ldc = n + 1;
    const auto A = random_vec(rng, m * lda), B = random_vec(rng, k * ldb);
    auto C1 = random_vec(rng, m * ldc);
    auto C2 = C1;
    s.gemm(m, n, k, A.data(), lda, B.data(), ldb, C1.data(), ldc);
    avx->gemm(m, n, k, A.data(), lda, B.data(), ldb, C2.data(), ldc);
    for (std::size_t i = 0; i < C1.size(); ++i) CHECK(C1[i] == doctest::Approx(C2[i]).epsilon(1e-12));
  }
}

TEST_CASE("scalar gemm matches a triple loop") {
  std::mt19937_64 rng(8);
  const std::size_t m = 6, n = 7, k = 5;
  const auto A = random_vec(rng, m * k), B = random_vec(rng, k * n);
  std::vector<double> C(m * n, 1.0), want(m * n, 1.0);
  simd::scalar_kernels().gemm(m, n, k, A.data(), k, B.data(), n, C.data(), n);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t p = 0; p < k; ++p) want[i * n + j] += A[i * k + p] * B[p * n + j];
    }
  }
  for (std::size_t i = 0; i < C.size(); ++i) CHECK(C[i] == doctest::Approx(want[i]).epsilon(1e-13));
}
