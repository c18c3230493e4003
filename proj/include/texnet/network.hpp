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
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "texnet/layers.hpp"
#include "texnet/tensor.hpp"

namespace texnet {

enum class FusionMode { kRgbOnly, kTexOnly, kEarly6, kEarly4, kLate };

std::string_view to_string(FusionMode m);
FusionMode parse_fusion_mode(std::string_view s);

struct ConvBlockSpec {
  std::size_t filters = 16;
  std::size_t kernel = 3;
  std::size_t stride = 1;
  std::size_t pool = 2;  // 1 disables pooling
};

struct FusionNetSpec {
  FusionMode mode = FusionMode::kRgbOnly;
  std::size_t input_side = 32;
  std::vector<ConvBlockSpec> conv_blocks{{16, 3, 1, 2}, {32, 3, 1, 2}, {64, 3, 1, 2}};
  std::vector<std::size_t> fc_dims{128};
  std::size_t class_count = 2;

  // Number of input streams forward() expects: 2 for late fusion, else 1 or 2
  // (early modes also accept the RGB and texture streams separately).
  std::size_t tower_count() const { return mode == FusionMode::kLate ? 2 : 1; }
  // Total input channels per tower.
  std::size_t tower_channels() const;
  std::size_t penultimate_width() const;
  void validate() const;
};

nlohmann::ordered_json to_json(const FusionNetSpec& spec);
FusionNetSpec fusion_spec_from_json(const nlohmann::json& j);

struct ForwardResult {
  Tensor logits;
  Tensor penultimate;
};

class Network {
 public:
  Network(FusionNetSpec spec, std::uint64_t seed);
  Network(const Network&) = delete;
  Network& operator=(const Network&) = delete;
  Network(Network&&) noexcept;
  Network& operator=(Network&&) noexcept;
  ~Network();

  const FusionNetSpec& spec() const noexcept { return spec_; }
  std::uint64_t seed() const noexcept { return seed_; }

  // Late mode: two N x 3 x S x S streams (rgb, texture). Other modes: either a
  // single stream carrying every channel or several streams concatenated along
  // the channel axis in order.
  ForwardResult forward(std::span<const Tensor> streams);

  // Runs forward and backward, zeroing then filling every parameter gradient
  // with d(mean CE + wd/2 * sum w^2)/dw over decaying blocks. Returns the loss.
  double backward(std::span<const Tensor> streams, std::span<const int> labels,
                  double weight_decay = 0.0);

  // Input gradients from the last backward(), one per stream passed in.
  const std::vector<Tensor>& input_gradients() const noexcept { return input_grads_; }

  // Declaration order: towers in order (rgb, tex or joint), then head.
  std::vector<Parameter*> parameters();
  Parameter& parameter(std::string_view name);
  void zero_grad();

 private:
  struct Tower;
  FusionNetSpec spec_;
  std::uint64_t seed_;
  std::vector<std::unique_ptr<Tower>> towers_;
  std::unique_ptr<Dense> head_;
  std::vector<Tensor> input_grads_;
  std::vector<std::size_t> stream_channels_;
};

}  // namespace texnet
