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

#include <random>

#include "oracles.hpp"
#include "texnet/emd.hpp"
#include "texnet/error.hpp"

using namespace texnet;

TEST_CASE("bit distributions and ground distance") {
  const auto b = BitDistribution::from_code(0b10010010, 8);
  CHECK(b.positions == std::vector<int>{1, 4, 7});
  CHECK(circular_ground_distance(0, 4, 8) == 1.0);
  CHECK(circular_ground_distance(0, 7, 8) == 0.25);
  CHECK(circular_ground_distance(3, 3, 8) == 0.0);
  for (int p = 0; p < 8; ++p) {
    for (int q = 0; q < 8; ++q) CHECK(circular_ground_distance(p, q, 8) == oracle::circular_distance(p, q, 8));
  }
}

TEST_CASE("code_emd examples") {
  for (std::uint32_t c = 0; c < 256; ++c) CHECK(code_emd(c, c, 8) == 0.0);
  CHECK(code_emd(0b00000001, 0b00000010, 8) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(oracle::brute_force_emd(0b00000001, 0b00000010, 8) == doctest::Approx(0.25));
  CHECK(code_emd(0x00, 0xFF, 8) == 8.0);
  CHECK(oracle::brute_force_emd(0x00, 0xFF, 8) == 8.0);
  // Wrap-around: bit 0 and bit 7 are neighbours.
  CHECK(code_emd(0b00000001, 0b10000000, 8) == doctest::Approx(0.25));
}

TEST_CASE("code_emd matches the permutation oracle") {
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<std::uint32_t> code(0, 255);
  for (int i = 0; i < 300; ++i) {
    const std::uint32_t j = code(rng), k = code(rng);
    CHECK(std::abs(code_emd(j, k, 8) - oracle::brute_force_emd(j, k, 8)) <= 1e-9);
  }
  std::uniform_int_distribution<std::uint32_t> code6(0, 63);
  for (int i = 0; i < 100; ++i) {
    const std::uint32_t j = code6(rng), k = code6(rng);
    CHECK(std::abs(code_emd(j, k, 6) - oracle::brute_force_emd(j, k, 6)) <= 1e-9);
  }
}

TEST_CASE("assignment solver") {
  // Classic 3x3 example with optimum 5 (0->1, 1->0, 2->2).
  const std::vector<double> cost{4, 1, 3, 2, 0, 5, 3, 2, 2};
  std::vector<int> a;
  CHECK(min_cost_assignment(cost, 3, 3, &a) == doctest::Approx(5.0));
  CHECK(a == std::vector<int>{1, 0, 2});
  // Rectangular: two rows, three columns.
  const std::vector<double> rect{5, 1, 9, 2, 8, 1};
  CHECK(min_cost_assignment(rect, 2, 3, &a) == doctest::Approx(2.0));
}

TEST_CASE("dissimilarity matrix at P=4 and P=8") {
  const auto m4 = build_dissimilarity_matrix(4);
  CHECK(m4.size() == 16);
  CHECK_NOTHROW(m4.validate());
  // The largest value is the all-zero vs all-one pair (4 unmatched units).
  CHECK(m4.scale() == 4.0);
  CHECK(m4(0, 15) == 1.0);

  const auto m8 = build_dissimilarity_matrix(8, 3);
  CHECK(m8.scale() == 8.0);
  for (std::size_t i = 0; i < 256; ++i) {
    CHECK(m8(i, i) == 0.0);
    for (std::size_t j = 0; j < 256; ++j) {
      REQUIRE(m8(i, j) == m8(j, i));
      REQUIRE(m8(i, j) * 8.0 == doctest::Approx(code_emd(static_cast<std::uint32_t>(i),
                                                          static_cast<std::uint32_t>(j), 8)));
    }
  }
  CHECK(build_dissimilarity_matrix(8, 1).entries() == m8.entries());
}

TEST_CASE("triangle inequality on sampled triples") {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<std::uint32_t> code(0, 255);
  for (int i = 0; i < 2000; ++i) {
    const std::uint32_t a = code(rng), b = code(rng), c = code(rng);
    CHECK(code_emd(a, c, 8) <= code_emd(a, b, 8) + code_emd(b, c, 8) + 1e-9);
  }
}

TEST_CASE("matrix validation and limits") {
  DissimilarityMatrix bad(2, {0.0, 1.0, 2.0, 0.0});
  CHECK_THROWS_AS(bad.validate(), DataError);
  CHECK_THROWS_AS(build_dissimilarity_matrix(17), ConfigError);
}
