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

#include "texnet/linear_svm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "texnet/error.hpp"
#include "texnet/simd/kernels.hpp"

namespace texnet {

void SvmConfig::validate() const {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw ConfigError("eval.svm_lambda must be positive");
  if (epochs == 0) throw ConfigError("eval.svm_epochs must be positive");
}

std::vector<double> LinearModel::scores(std::span<const double> x) const {
  if (x.size() != dims) {
    throw ShapeError("linear model expects " + std::to_string(dims) + " features, got " +
                     std::to_string(x.size()));
  }
  const auto& k = simd::active();
  std::vector<double> s(classes);
  for (std::size_t c = 0; c < classes; ++c) s[c] = k.dot(weights.data() + c * dims, x.data(), dims) + biases[c];
  return s;
}

int LinearModel::predict(std::span<const double> x) const {
  const std::vector<double> s = scores(x);
  return static_cast<int>(std::max_element(s.begin(), s.end()) - s.begin());
}

LinearModel train_linear_ova(const Tensor& features, std::span<const int> labels,
                             std::size_t class_count, const SvmConfig& cfg) {
  cfg.validate();
  if (features.rank() != 2 || features.dim(0) != labels.size()) {
    throw ShapeError("train_linear_ova: " + std::to_string(labels.size()) + " labels for features " +
                     features.shape_string());
  }
  if (labels.empty()) throw DataError("train_linear_ova: no training samples");
  std::vector<std::size_t> seen(class_count, 0);
  for (int y : labels) {
    if (y < 0 || static_cast<std::size_t>(y) >= class_count) {
      throw DataError("train_linear_ova: label " + std::to_string(y) + " out of range");
    }
    ++seen[static_cast<std::size_t>(y)];
  }
  if (std::count_if(seen.begin(), seen.end(), [](std::size_t n) { return n > 0; }) < 2) {
    throw DataError("train_linear_ova: training data covers fewer than two classes");
  }
  const auto& k = simd::active();
  const std::size_t n = labels.size(), d = features.dim(1);
  LinearModel m{class_count, d, std::vector<double>(class_count * d, 0.0),
                std::vector<double>(class_count, 0.0)};
  std::mt19937_64 rng(cfg.seed);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::size_t t = 0;
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t i : order) {
      const double eta = 1.0 / (1.0 + cfg.lambda * static_cast<double>(t++));
      const double shrink = 1.0 - eta * cfg.lambda;
      const double* x = features.data() + i * d;
      for (std::size_t c = 0; c < class_count; ++c) {
        double* w = m.weights.data() + c * d;
        const double y = labels[i] == static_cast<int>(c) ? 1.0 : -1.0;
        const double margin = y * (k.dot(w, x, d) + m.biases[c]);
        for (std::size_t j = 0; j < d; ++j) w[j] *= shrink;
        if (margin < 1.0) {
          k.axpy(eta * y, x, w, d);
          m.biases[c] += eta * y;
        }
      }
    }
  }
  return m;
}

RunMetrics evaluate(const LinearModel& model, const Tensor& features, std::span<const int> labels) {
  if (features.rank() != 2 || features.dim(0) != labels.size()) {
    throw ShapeError("evaluate: " + std::to_string(labels.size()) + " labels for features " +
                     features.shape_string());
  }
  RunMetrics r;
  r.total = labels.size();
  r.confusion.assign(model.classes, std::vector<std::size_t>(model.classes, 0));
  const std::size_t d = features.dim(1);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const int pred = model.predict(std::span<const double>(features.data() + i * d, d));
    const auto y = static_cast<std::size_t>(labels[i]);
    if (y >= model.classes) throw DataError("evaluate: label out of range");
    ++r.confusion[y][static_cast<std::size_t>(pred)];
    if (pred == labels[i]) ++r.correct;
  }
  r.accuracy = r.total ? static_cast<double>(r.correct) / static_cast<double>(r.total) : 0.0;
  return r;
}

Tensor l2_normalize_rows(const Tensor& features) {
  Tensor out = features;
  if (out.rank() == 0) return out;
  const std::size_t d = out.stride0();
  for (std::size_t i = 0; i < out.dim(0); ++i) {
    double* row = out.data() + i * d;
    double norm = 0.0;
    for (std::size_t j = 0; j < d; ++j) norm += row[j] * row[j];
    norm = std::sqrt(norm);
    if (norm > 0.0) {
      for (std::size_t j = 0; j < d; ++j) row[j] /= norm;
    }
  }
  return out;
}

}  // namespace texnet
