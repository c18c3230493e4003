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

#include "texnet/train.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>
#include <string>

#include "texnet/embedding_io.hpp"
#include "texnet/error.hpp"

namespace texnet {

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw ConfigError("train.learning_rate must be positive");
  }
  if (!(momentum >= 0.0 && momentum < 1.0)) throw ConfigError("train.momentum must lie in [0, 1)");
  if (!(weight_decay >= 0.0) || !std::isfinite(weight_decay)) {
    throw ConfigError("train.weight_decay must be non-negative");
  }
  if (epochs == 0) throw ConfigError("train.epochs must be positive");
  if (batch_size == 0) throw ConfigError("train.batch_size must be positive");
}

std::vector<Tensor> select_streams(FusionMode mode, const TrainingSet& data,
                                   std::span<const std::size_t> index) {
  auto pick = [&](const Tensor& t, const char* what) {
    if (t.rank() != 4) {
      throw ShapeError(std::string(to_string(mode)) + " needs the " + what + " stream");
    }
    return index.empty() ? t : gather_rows(t, index);
  };
  switch (mode) {
    case FusionMode::kRgbOnly: return {pick(data.rgb, "rgb")};
    case FusionMode::kTexOnly: return {pick(data.tex, "texture")};
    default: return {pick(data.rgb, "rgb"), pick(data.tex, "texture")};
  }
}

void sgd_step(std::span<Parameter* const> params, std::vector<std::vector<double>>& velocity,
              const TrainConfig& cfg) {
  if (velocity.size() != params.size()) {
    velocity.clear();
    for (const Parameter* p : params) velocity.emplace_back(p->size(), 0.0);
  }
  for (std::size_t b = 0; b < params.size(); ++b) {
    Parameter& p = *params[b];
    if (velocity[b].size() != p.size() || p.grad.size() != p.size()) {
      throw ShapeError("sgd_step: block '" + p.name + "' has mismatched sizes");
    }
    for (double g : p.grad) {
      if (!std::isfinite(g)) throw NumericError("non-finite gradient in block '" + p.name + "'");
    }
  }
  for (std::size_t b = 0; b < params.size(); ++b) {
    Parameter& p = *params[b];
    std::vector<double>& v = velocity[b];
    const double wd = p.decay ? cfg.weight_decay : 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      v[i] = cfg.momentum * v[i] - cfg.learning_rate * (p.grad[i] + wd * p.value[i]);
      p.value[i] += v[i];
    }
  }
}

TrainResult train(const FusionNetSpec& spec, const TrainingSet& data, const TrainConfig& cfg) {
  cfg.validate();
  if (data.size() == 0) throw DataError("train: empty dataset");
  for (int y : data.labels) {
    if (y < 0 || static_cast<std::size_t>(y) >= spec.class_count) {
      throw DataError("train: label " + std::to_string(y) + " outside [0, " +
                      std::to_string(spec.class_count) + ")");
    }
  }
  const std::vector<Tensor> all = select_streams(spec.mode, data);
  for (const Tensor& t : all) {
    if (t.dim(0) != data.size()) throw ShapeError("train: stream and label counts differ");
  }

  TrainResult r{Network(spec, cfg.seed), {}};
  std::mt19937_64 rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<std::vector<double>> velocity;
  std::vector<Parameter*> params = r.net.parameters();

  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double total = 0.0;
    std::size_t batches = 0;
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const std::size_t end = std::min(order.size(), start + cfg.batch_size);
      const std::span<const std::size_t> idx(order.data() + start, end - start);
      std::vector<Tensor> batch;
      for (const Tensor& t : all) batch.push_back(gather_rows(t, idx));
      std::vector<int> labels;
      for (std::size_t i : idx) labels.push_back(data.labels[i]);
      const double loss = r.net.backward(batch, labels, 0.0);
      if (!std::isfinite(loss)) {
        throw NumericError("training diverged: non-finite loss at epoch " + std::to_string(epoch) +
                           ", batch " + std::to_string(batches) + " (try a lower learning rate)");
      }
      sgd_step(params, velocity, cfg);
      total += loss;
      ++batches;
    }
    r.loss_curve.push_back(total / static_cast<double>(batches));
  }
  return r;
}

Tensor extract_features(Network& net, std::span<const Tensor> streams, std::size_t batch_size) {
  if (streams.empty()) throw ShapeError("extract_features: no input streams");
  const std::size_t n = streams[0].dim(0);
  const std::size_t width = net.spec().penultimate_width();
  Tensor out({n, width});
  batch_size = std::max<std::size_t>(1, batch_size);
  for (std::size_t start = 0; start < n; start += batch_size) {
    const std::size_t end = std::min(n, start + batch_size);
    std::vector<std::size_t> idx(end - start);
    std::iota(idx.begin(), idx.end(), start);
    std::vector<Tensor> batch;
    for (const Tensor& t : streams) batch.push_back(gather_rows(t, idx));
    const ForwardResult fr = net.forward(batch);
    for (std::size_t i = 0; i < idx.size(); ++i) {
      const double* src = fr.penultimate.data() + i * width;
      double norm = 0.0;
      for (std::size_t k = 0; k < width; ++k) norm += src[k] * src[k];
      norm = std::sqrt(norm);
      double* dst = out.data() + (start + i) * width;
      for (std::size_t k = 0; k < width; ++k) dst[k] = norm > 0.0 ? src[k] / norm : 0.0;
    }
  }
  return out;
}

void write_loss_curve(const std::filesystem::path& path, std::span<const double> curve) {
  std::string text = "epoch,mean_loss\n";
  char buf[64];
  for (std::size_t i = 0; i < curve.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g\n", i, curve[i]);
    text += buf;
  }
  write_text_file(path, text);
}

}  // namespace texnet
