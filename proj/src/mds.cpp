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

#include "texnet/mds.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <string>

#include "texnet/error.hpp"

namespace texnet {
namespace {

// Flips every column whose largest-magnitude entry (first on ties) is negative.
void fix_signs(std::vector<double>& coords, std::size_t count, int dims) {
  for (int d = 0; d < dims; ++d) {
    std::size_t best = 0;
    double best_abs = -1.0;
    for (std::size_t i = 0; i < count; ++i) {
      const double a = std::abs(coords[i * dims + d]);
      if (a > best_abs) {
        best_abs = a;
        best = i;
      }
    }
    if (coords[best * dims + d] < 0.0) {
      for (std::size_t i = 0; i < count; ++i) coords[i * dims + d] = -coords[i * dims + d];
    }
  }
}

}  // namespace

CodeEmbedding classical_mds(const DissimilarityMatrix& dist, int dims) {
  const std::size_t n = dist.size();
  if (dims < 1 || static_cast<std::size_t>(dims) > n) {
    throw ConfigError("classical_mds: dims must be in [1, " + std::to_string(n) + "], got " +
                      std::to_string(dims));
  }
  Eigen::MatrixXd sq(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) sq(i, j) = dist(i, j) * dist(i, j);
  }
  // Double centring without forming J explicitly.
  const Eigen::VectorXd row_mean = sq.rowwise().mean();
  const Eigen::RowVectorXd col_mean = sq.colwise().mean();
  const double grand_mean = sq.mean();
  Eigen::MatrixXd b(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      b(i, j) = -0.5 * (sq(i, j) - row_mean(i) - col_mean(j) + grand_mean);
    }
  }
  b = 0.5 * (b + b.transpose()).eval();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(b);
  if (solver.info() != Eigen::Success) throw NumericError("classical_mds: eigensolver failed");
  const Eigen::VectorXd& values = solver.eigenvalues();  // ascending
  const Eigen::MatrixXd& vectors = solver.eigenvectors();

  const double top = values(static_cast<Eigen::Index>(n) - 1);
  const double tolerance = std::max(top, 0.0) * 1e-10 * static_cast<double>(n);

  CodeEmbedding emb;
  emb.dims = dims;
  emb.coords.assign(n * dims, 0.0);
  for (int d = 0; d < dims; ++d) {
    const Eigen::Index col = static_cast<Eigen::Index>(n) - 1 - d;
    const double lambda = values(col);
    if (!(lambda > tolerance)) {
      emb.padded = true;
      emb.eigenvalues.push_back(0.0);
      continue;
    }
    emb.eigenvalues.push_back(lambda);
    const double s = std::sqrt(lambda);
    for (std::size_t i = 0; i < n; ++i) emb.coords[i * dims + d] = vectors(i, col) * s;
  }
  fix_signs(emb.coords, n, dims);
  emb.stress = embedding_stress(dist, emb);
  return emb;
}

double embedding_stress(const DissimilarityMatrix& dist, const CodeEmbedding& emb) {
  const std::size_t n = dist.size();
  if (emb.count() != n) {
    throw ShapeError("embedding_stress: embedding has " + std::to_string(emb.count()) +
                     " points, matrix has " + std::to_string(n));
  }
  double num = 0.0;
  double den = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = j + 1; k < n; ++k) {
      double sq = 0.0;
      for (int d = 0; d < emb.dims; ++d) {
        const double diff = emb.at(j, d) - emb.at(k, d);
        sq += diff * diff;
      }
      const double r = dist(j, k) - std::sqrt(sq);
      num += r * r;
      den += dist(j, k) * dist(j, k);
    }
  }
  return den > 0.0 ? std::sqrt(num / den) : 0.0;
}

CodeEmbedding normalize_embedding(const CodeEmbedding& emb) {
  const std::size_t n = emb.count();
  if (n < 2) throw DataError("normalize_embedding: need at least two points");
  CodeEmbedding out = emb;
  fix_signs(out.coords, n, out.dims);
  for (int d = 0; d < out.dims; ++d) {
    double lo = out.at(0, d);
    double hi = lo;
    for (std::size_t i = 1; i < n; ++i) {
      lo = std::min(lo, out.at(i, d));
      hi = std::max(hi, out.at(i, d));
    }
    const double range = hi - lo;
    for (std::size_t i = 0; i < n; ++i) {
      double& v = out.coords[i * out.dims + d];
      v = range > 0.0 ? (v - lo) / range : 0.5;
    }
  }
  out.normalized = true;
  return out;
}

}  // namespace texnet
