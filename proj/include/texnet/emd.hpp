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

#include <cstddef>
#include <cstdint>
#include <vector>

namespace texnet {

// A P-bit code viewed as one unit of mass at each set bit's angular position.
struct BitDistribution {
  int points = 0;
  std::vector<int> positions;  // ascending bit indices

  static BitDistribution from_code(std::uint32_t code, int points);
};

// Arc distance between sampling positions p and q on a P-point circle,
// normalised so that opposite points are 1 apart.
double circular_ground_distance(int p, int q, int points);

// Mass penalty for each unit present in one code but not the other.
inline constexpr double kUnmatchedMassPenalty = 1.0;

// Earth mover's distance between two codes: minimum-cost matching of
// min(popcount) unit masses under the circular ground distance, plus
// kUnmatchedMassPenalty per unit of popcount difference. Metric.
double code_emd(std::uint32_t j, std::uint32_t k, int points);

// Minimum total cost of assigning each row to a distinct column
// (rows <= cols). `cost` is row-major rows x cols. Returns the optimal cost
// and fills `assignment[row] = column` when non-null.
double min_cost_assignment(const std::vector<double>& cost, std::size_t rows, std::size_t cols,
                           std::vector<int>* assignment = nullptr);

// Square symmetric matrix of non-negative dissimilarities.
class DissimilarityMatrix {
 public:
  DissimilarityMatrix() = default;
  explicit DissimilarityMatrix(std::size_t size);
  DissimilarityMatrix(std::size_t size, std::vector<double> entries);

  std::size_t size() const noexcept { return size_; }
  double operator()(std::size_t i, std::size_t j) const { return entries_[i * size_ + j]; }
  double& operator()(std::size_t i, std::size_t j) { return entries_[i * size_ + j]; }
  const std::vector<double>& entries() const noexcept { return entries_; }

  // Divisor applied by build_dissimilarity_matrix (1 when not rescaled).
  double scale() const noexcept { return scale_; }
  void set_scale(double s) noexcept { scale_ = s; }

  // Throws DataError unless square, symmetric, zero-diagonal, finite and >= 0.
  void validate() const;

 private:
  std::size_t size_ = 0;
  std::vector<double> entries_;
  double scale_ = 1.0;
};

// All 2^P x 2^P code_emd values divided by the largest one, so entries lie in
// [0,1]. Rows are computed on `threads` workers; results do not depend on it.
DissimilarityMatrix build_dissimilarity_matrix(int points, unsigned threads = 1);

}  // namespace texnet
