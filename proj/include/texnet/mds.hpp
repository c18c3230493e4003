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
#include <span>
#include <vector>

#include "texnet/emd.hpp"

namespace texnet {

// Points L_0..L_{n-1} in R^D whose pairwise distances approximate a
// dissimilarity matrix. Row-major n x D coordinates; dimension 0 carries the
// largest eigenvalue.
struct CodeEmbedding {
  int points = 0;  // LBP P the embedding indexes (0 for a generic point set)
  int dims = 0;
  std::vector<double> coords;
  std::vector<double> eigenvalues;  // one per dimension, descending
  double stress = 0.0;
  // True when fewer than `dims` eigenvalues were positive; those trailing
  // coordinates are zero.
  bool padded = false;
  bool normalized = false;

  std::size_t count() const { return dims == 0 ? 0 : coords.size() / static_cast<std::size_t>(dims); }
  double at(std::size_t item, int dim) const { return coords[item * dims + dim]; }
  std::span<const double> point(std::size_t item) const {
    return std::span<const double>(coords).subspan(item * dims, static_cast<std::size_t>(dims));
  }
};

// Torgerson scaling: B = -1/2 J D^2 J, top-`dims` eigenpairs, coordinates
// v * sqrt(lambda). Each eigenvector's sign is fixed so that its
// largest-magnitude entry is positive. Stress is recorded on the result.
CodeEmbedding classical_mds(const DissimilarityMatrix& dist, int dims);

// sqrt( sum_{j<k} (d_jk - |L_j - L_k|)^2 / sum_{j<k} d_jk^2 ), 0 when all d are 0.
double embedding_stress(const DissimilarityMatrix& dist, const CodeEmbedding& emb);

// Per-dimension affine map onto [0,1] after the sign convention above;
// constant dimensions map to 0.5. Idempotent.
CodeEmbedding normalize_embedding(const CodeEmbedding& emb);

}  // namespace texnet
