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

#include "texnet/emd.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>
#include <thread>

#include "texnet/error.hpp"

namespace texnet {

BitDistribution BitDistribution::from_code(std::uint32_t code, int points) {
  BitDistribution d{points, {}};
  for (int p = 0; p < points; ++p) {
    if (code & (1u << p)) d.positions.push_back(p);
  }
  return d;
}

double circular_ground_distance(int p, int q, int points) {
  const int diff = std::abs(p - q) % points;
  const int arc = std::min(diff, points - diff);
  return static_cast<double>(arc) / (static_cast<double>(points) / 2.0);
}

// Shortest augmenting path with row/column potentials (Kuhn-Munkres), O(n^2 m).
double min_cost_assignment(const std::vector<double>& cost, std::size_t rows, std::size_t cols,
                           std::vector<int>* assignment) {
  if (rows > cols) throw ShapeError("min_cost_assignment: more rows than columns");
  if (cost.size() != rows * cols) throw ShapeError("min_cost_assignment: cost size mismatch");
  if (rows == 0) {
    if (assignment) assignment->clear();
    return 0.0;
  }
  constexpr double kInf = std::numeric_limits<double>::infinity();
  const std::size_t n = rows;
  const std::size_t m = cols;
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0), minv(m + 1);
  std::vector<std::size_t> match(m + 1, 0), way(m + 1, 0);
  std::vector<char> used(m + 1);
  auto a = [&](std::size_t i, std::size_t j) { return cost[(i - 1) * m + (j - 1)]; };

  for (std::size_t i = 1; i <= n; ++i) {
    match[0] = i;
    std::size_t j0 = 0;
    std::fill(minv.begin(), minv.end(), kInf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = match[j0];
      double delta = kInf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = a(i0, j) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= m; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  if (assignment) assignment->assign(n, -1);
  double total = 0.0;
  for (std::size_t j = 1; j <= m; ++j) {
    if (match[j] == 0) continue;
    total += a(match[j], j);
    if (assignment) (*assignment)[match[j] - 1] = static_cast<int>(j - 1);
  }
  return total;
}

double code_emd(std::uint32_t j, std::uint32_t k, int points) {
  if (points < 1 || points > 24) throw ConfigError("code_emd: points must be in [1, 24]");
  const std::uint32_t mask = (points == 32) ? ~0u : (1u << points) - 1;
  if ((j & ~mask) || (k & ~mask)) throw ConfigError("code_emd: code exceeds 2^P - 1");
  if (j == k) return 0.0;
  BitDistribution a = BitDistribution::from_code(j, points);
  BitDistribution b = BitDistribution::from_code(k, points);
  if (a.positions.size() > b.positions.size()) std::swap(a, b);
  const std::size_t rows = a.positions.size();
  const std::size_t cols = b.positions.size();
  std::vector<double> cost(rows * cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      cost[r * cols + c] = circular_ground_distance(a.positions[r], b.positions[c], points);
    }
  }
  const double matched = min_cost_assignment(cost, rows, cols);
  return matched + static_cast<double>(cols - rows) * kUnmatchedMassPenalty;
}

DissimilarityMatrix::DissimilarityMatrix(std::size_t size)
    : size_(size), entries_(size * size, 0.0) {}

DissimilarityMatrix::DissimilarityMatrix(std::size_t size, std::vector<double> entries)
    : size_(size), entries_(std::move(entries)) {
  if (entries_.size() != size * size) {
    throw ShapeError("DissimilarityMatrix: expected " + std::to_string(size * size) +
                     " entries, got " + std::to_string(entries_.size()));
  }
}

void DissimilarityMatrix::validate() const {
  for (std::size_t i = 0; i < size_; ++i) {
    if ((*this)(i, i) != 0.0) throw DataError("dissimilarity matrix: non-zero diagonal");
    for (std::size_t j = 0; j < size_; ++j) {
      const double d = (*this)(i, j);
      if (!std::isfinite(d) || d < 0.0) {
        throw DataError("dissimilarity matrix: entry is negative or non-finite");
      }
      if (d != (*this)(j, i)) throw DataError("dissimilarity matrix: not symmetric");
    }
  }
}

DissimilarityMatrix build_dissimilarity_matrix(int points, unsigned threads) {
  if (points < 1 || points > 16) {
    throw ConfigError("build_dissimilarity_matrix: points must be in [1, 16], got " +
                      std::to_string(points));
  }
  const std::size_t n = std::size_t{1} << points;
  DissimilarityMatrix m(n);
  auto fill_rows = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double d = code_emd(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j),
                                  points);
        m(i, j) = d;
        m(j, i) = d;
      }
    }
  };
  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
  if (workers == 1) {
    fill_rows(0, n);
  } else {
    // Interleave rows so the triangular workload is balanced.
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < n; i += workers) fill_rows(i, i + 1);
      });
    }
  }
  double max_entry = 0.0;
  for (double d : m.entries()) max_entry = std::max(max_entry, d);
  if (max_entry > 0.0) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) m(i, j) /= max_entry;
    }
    m.set_scale(max_entry);
  }
  return m;
}

}  // namespace texnet
