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

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "texnet/network.hpp"
#include "texnet/tensor.hpp"

namespace texnet {

struct TrainConfig {
  double learning_rate = 0.001;
  double weight_decay = 0.0005;
  double momentum = 0.9;
  std::size_t epochs = 10;
  std::size_t batch_size = 16;
  std::uint64_t seed = 1;

  void validate() const;
};

// Parallel image stacks: rgb is N x 3 x S x S, tex is N x C x S x S (C = 3,
// or 1 for the collapsed texture channel). tex may be empty for rgb_only.
struct TrainingSet {
  Tensor rgb;
  Tensor tex;
  std::vector<int> labels;

  std::size_t size() const noexcept { return labels.size(); }
};

// Input streams `mode` consumes, restricted to the rows in `index` (all rows if empty).
std::vector<Tensor> select_streams(FusionMode mode, const TrainingSet& data,
                                   std::span<const std::size_t> index = {});

// v <- momentum*v - lr*(g + wd*w) on decaying blocks (wd = 0 for the rest); w <- w + v.
// `velocity` is resized on first use. Non-finite gradients raise NumericError.
void sgd_step(std::span<Parameter* const> params, std::vector<std::vector<double>>& velocity,
              const TrainConfig& cfg);

struct TrainResult {
  Network net;
  std::vector<double> loss_curve;  // mean mini-batch loss per epoch
};

// Shuffled mini-batch SGD with momentum. The network is seeded from cfg.seed.
TrainResult train(const FusionNetSpec& spec, const TrainingSet& data, const TrainConfig& cfg);

// Penultimate activations, L2-normalised per row (zero rows stay zero).
Tensor extract_features(Network& net, std::span<const Tensor> streams,
                        std::size_t batch_size = 64);

// Header "epoch,mean_loss".
void write_loss_curve(const std::filesystem::path& path, std::span<const double> curve);

}  // namespace texnet
