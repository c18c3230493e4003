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

#include "texnet/network.hpp"

#include <algorithm>
#include <random>

#include "texnet/error.hpp"

namespace texnet {

std::string_view to_string(FusionMode m) {
  switch (m) {
    case FusionMode::kRgbOnly: return "rgb_only";
    case FusionMode::kTexOnly: return "tex_only";
    case FusionMode::kEarly6: return "early_6ch";
    case FusionMode::kEarly4: return "early_4ch";
    case FusionMode::kLate: return "late";
  }
  return "?";
}

FusionMode parse_fusion_mode(std::string_view s) {
  for (FusionMode m : {FusionMode::kRgbOnly, FusionMode::kTexOnly, FusionMode::kEarly6,
                       FusionMode::kEarly4, FusionMode::kLate}) {
    if (s == to_string(m)) return m;
  }
  throw ConfigError("net.fusion_mode: unknown mode '" + std::string(s) +
                    "' (expected rgb_only, tex_only, early_6ch, early_4ch or late)");
}

std::size_t FusionNetSpec::tower_channels() const {
  switch (mode) {
    case FusionMode::kEarly6: return 6;
    case FusionMode::kEarly4: return 4;
    default: return 3;
  }
}

namespace {

std::size_t conv_out(std::size_t side, const ConvBlockSpec& b) {
  const std::size_t pad = b.kernel / 2;
  if (side + 2 * pad < b.kernel) return 0;
  return (side + 2 * pad - b.kernel) / b.stride + 1;
}

// Spatial side after every conv block, 0 if it collapses.
std::size_t final_side(const FusionNetSpec& s) {
  std::size_t side = s.input_side;
  for (const auto& b : s.conv_blocks) {
    side = conv_out(side, b);
    side /= b.pool;
    if (side == 0) return 0;
  }
  return side;
}

}  // namespace

std::size_t FusionNetSpec::penultimate_width() const {
  std::size_t per_tower;
  if (!fc_dims.empty()) {
    per_tower = fc_dims.back();
  } else {
    const std::size_t side = final_side(*this);
    const std::size_t ch = conv_blocks.empty() ? tower_channels() : conv_blocks.back().filters;
    per_tower = ch * side * side;
  }
  return per_tower * tower_count();
}

void FusionNetSpec::validate() const {
  if (input_side == 0) throw ConfigError("net.input_side must be positive");
  if (class_count < 2) throw ConfigError("net.class_count must be at least 2");
  for (std::size_t i = 0; i < conv_blocks.size(); ++i) {
    const auto& b = conv_blocks[i];
    const std::string at = "net.conv_blocks[" + std::to_string(i) + "]";
    if (b.filters == 0) throw ConfigError(at + ".filters must be positive");
    if (b.kernel == 0) throw ConfigError(at + ".kernel must be positive");
    if (b.stride == 0) throw ConfigError(at + ".stride must be positive");
    if (b.pool == 0) throw ConfigError(at + ".pool must be positive");
  }
  for (std::size_t i = 0; i < fc_dims.size(); ++i) {
    if (fc_dims[i] == 0) {
      throw ConfigError("net.fc_dims[" + std::to_string(i) + "] must be positive");
    }
  }
  if (final_side(*this) == 0) {
    throw ConfigError("net.conv_blocks reduce a " + std::to_string(input_side) +
                      "-pixel input to nothing");
  }
}

nlohmann::ordered_json to_json(const FusionNetSpec& spec) {
  nlohmann::ordered_json j;
  j["fusion_mode"] = std::string(to_string(spec.mode));
  j["input_side"] = spec.input_side;
  j["input_channels"] = spec.tower_channels() * spec.tower_count();
  auto blocks = nlohmann::ordered_json::array();
  for (const auto& b : spec.conv_blocks) {
    blocks.push_back({{"filters", b.filters}, {"kernel", b.kernel}, {"stride", b.stride},
                      {"pool", b.pool}});
  }
  j["conv_blocks"] = blocks;
  j["fc_dims"] = spec.fc_dims;
  j["class_count"] = spec.class_count;
  return j;
}

FusionNetSpec fusion_spec_from_json(const nlohmann::json& j) {
  FusionNetSpec s;
  try {
    if (j.contains("fusion_mode")) s.mode = parse_fusion_mode(j.at("fusion_mode").get<std::string>());
    if (j.contains("input_side")) s.input_side = j.at("input_side").get<std::size_t>();
    if (j.contains("conv_blocks")) {
      s.conv_blocks.clear();
      for (const auto& b : j.at("conv_blocks")) {
        ConvBlockSpec c;
        c.filters = b.value("filters", c.filters);
        c.kernel = b.value("kernel", c.kernel);
        c.stride = b.value("stride", c.stride);
        c.pool = b.value("pool", c.pool);
        s.conv_blocks.push_back(c);
      }
    }
    if (j.contains("fc_dims")) s.fc_dims = j.at("fc_dims").get<std::vector<std::size_t>>();
    if (j.contains("class_count")) s.class_count = j.at("class_count").get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("net: ") + e.what());
  }
  if (j.contains("input_channels")) {
    const auto got = j.at("input_channels").get<std::size_t>();
    const std::size_t want = s.tower_channels() * s.tower_count();
    if (got != want) {
      throw ConfigError("net.input_channels: fusion mode '" + std::string(to_string(s.mode)) +
                        "' takes " + std::to_string(want) + " channels, config says " +
                        std::to_string(got));
    }
  }
  return s;
}

struct Network::Tower {
  std::string name;
  std::vector<std::unique_ptr<Layer>> layers;

  Tower(std::string n, const FusionNetSpec& spec, std::mt19937_64& rng) : name(std::move(n)) {
    std::size_t channels = spec.tower_channels();
    std::size_t side = spec.input_side;
    for (std::size_t i = 0; i < spec.conv_blocks.size(); ++i) {
      const auto& b = spec.conv_blocks[i];
      auto conv = std::make_unique<Conv2d>(name + ".conv" + std::to_string(i + 1), channels,
                                           b.filters, b.kernel, b.stride);
      conv->init(rng);
      side = conv->output_side(side);
      layers.push_back(std::move(conv));
      layers.push_back(std::make_unique<Relu>());
      if (b.pool > 1) {
        layers.push_back(std::make_unique<MaxPool2d>(b.pool));
        side /= b.pool;
      }
      channels = b.filters;
    }
    std::size_t features = channels * side * side;
    for (std::size_t i = 0; i < spec.fc_dims.size(); ++i) {
      auto fc = std::make_unique<Dense>(name + ".fc" + std::to_string(i + 1), features,
                                        spec.fc_dims[i]);
      fc->init(rng);
      layers.push_back(std::move(fc));
      layers.push_back(std::make_unique<Relu>());
      features = spec.fc_dims[i];
    }
  }

  std::vector<std::size_t> in_shape;

  Tensor forward(const Tensor& x) {
    in_shape = x.shape();
    Tensor h = x;
    for (auto& l : layers) h = l->forward(h);
    return h.reshaped({h.dim(0), h.stride0()});
  }

  Tensor backward(const Tensor& dy) {
    Tensor g = dy;
    for (auto it = layers.rbegin(); it != layers.rend(); ++it) g = (*it)->backward(g);
    return g.reshaped(in_shape);
  }

  std::vector<Parameter*> parameters() {
    std::vector<Parameter*> out;
    for (auto& l : layers) {
      for (Parameter* p : l->parameters()) out.push_back(p);
    }
    return out;
  }
};

Network::Network(FusionNetSpec spec, std::uint64_t seed) : spec_(std::move(spec)), seed_(seed) {
  spec_.validate();
  std::mt19937_64 rng(seed);
  switch (spec_.mode) {
    case FusionMode::kRgbOnly: towers_.push_back(std::make_unique<Tower>("rgb", spec_, rng)); break;
    case FusionMode::kTexOnly: towers_.push_back(std::make_unique<Tower>("tex", spec_, rng)); break;
    case FusionMode::kLate:
      towers_.push_back(std::make_unique<Tower>("rgb", spec_, rng));
      towers_.push_back(std::make_unique<Tower>("tex", spec_, rng));
      break;
    default: towers_.push_back(std::make_unique<Tower>("joint", spec_, rng)); break;
  }
  head_ = std::make_unique<Dense>("head", spec_.penultimate_width(), spec_.class_count);
  head_->init(rng, 0.1);
}

Network::Network(Network&&) noexcept = default;
Network& Network::operator=(Network&&) noexcept = default;
Network::~Network() = default;

namespace {

void check_stream(const Tensor& t, const FusionNetSpec& spec, std::size_t n) {
  if (t.rank() != 4 || t.dim(2) != spec.input_side || t.dim(3) != spec.input_side) {
    throw ShapeError("network input: expected N x C x " + std::to_string(spec.input_side) + " x " +
                     std::to_string(spec.input_side) + ", got " + t.shape_string());
  }
  if (t.dim(0) != n) throw ShapeError("network input: streams disagree on batch size");
}

}  // namespace

ForwardResult Network::forward(std::span<const Tensor> streams) {
  if (streams.empty()) throw ShapeError("network input: no streams");
  const std::size_t n = streams[0].rank() > 0 ? streams[0].dim(0) : 0;
  stream_channels_.clear();
  for (const Tensor& t : streams) {
    check_stream(t, spec_, n);
    stream_channels_.push_back(t.dim(1));
  }
  std::vector<Tensor> outs;
  if (spec_.mode == FusionMode::kLate) {
    if (streams.size() != 2) {
      throw ShapeError("late fusion: expected 2 input streams, got " +
                       std::to_string(streams.size()));
    }
    for (std::size_t i = 0; i < 2; ++i) {
      if (streams[i].dim(1) != 3) {
        throw ShapeError(std::string("late fusion ") + (i == 0 ? "rgb" : "texture") +
                         " stream: expected 3 channels, got " + std::to_string(streams[i].dim(1)));
      }
      outs.push_back(towers_[i]->forward(streams[i]));
    }
  } else {
    Tensor x = streams.size() == 1 ? streams[0] : concat_axis1(streams);
    if (x.dim(1) != spec_.tower_channels()) {
      throw ShapeError(std::string(to_string(spec_.mode)) + ": expected " +
                       std::to_string(spec_.tower_channels()) + " input channels, got " +
                       std::to_string(x.dim(1)));
    }
    outs.push_back(towers_[0]->forward(x));
  }
  ForwardResult r;
  r.penultimate = outs.size() == 1 ? std::move(outs[0]) : concat_axis1(outs);
  r.logits = head_->forward(r.penultimate);
  return r;
}

double Network::backward(std::span<const Tensor> streams, std::span<const int> labels,
                         double weight_decay) {
  zero_grad();
  const ForwardResult fr = forward(streams);
  LossResult lr = softmax_cross_entropy(fr.logits, labels);
  const Tensor dpen = head_->backward(lr.dlogits);

  input_grads_.clear();
  if (spec_.mode == FusionMode::kLate) {
    const std::size_t n = dpen.dim(0);
    const std::size_t w = dpen.dim(1) / 2;
    for (std::size_t t = 0; t < 2; ++t) {
      Tensor part({n, w});
      for (std::size_t s = 0; s < n; ++s) {
        std::copy_n(dpen.data() + s * 2 * w + t * w, w, part.data() + s * w);
      }
      input_grads_.push_back(towers_[t]->backward(part));
    }
  } else {
    const Tensor dx = towers_[0]->backward(dpen);
    const std::size_t n = dx.dim(0), plane = dx.dim(2) * dx.dim(3);
    std::size_t offset = 0;
    for (std::size_t c : stream_channels_) {
      Tensor part({n, c, dx.dim(2), dx.dim(3)});
      for (std::size_t s = 0; s < n; ++s) {
        std::copy_n(dx.data() + s * dx.stride0() + offset * plane, c * plane,
                    part.data() + s * c * plane);
      }
      input_grads_.push_back(std::move(part));
      offset += c;
    }
  }

  double loss = lr.loss;
  if (weight_decay != 0.0) {
    for (Parameter* p : parameters()) {
      if (!p->decay) continue;
      for (std::size_t i = 0; i < p->size(); ++i) {
        loss += 0.5 * weight_decay * p->value[i] * p->value[i];
        p->grad[i] += weight_decay * p->value[i];
      }
    }
  }
  return loss;
}

std::vector<Parameter*> Network::parameters() {
  std::vector<Parameter*> out;
  for (auto& t : towers_) {
    for (Parameter* p : t->parameters()) out.push_back(p);
  }
  for (Parameter* p : head_->parameters()) out.push_back(p);
  return out;
}

Parameter& Network::parameter(std::string_view name) {
  for (Parameter* p : parameters()) {
    if (p->name == name) return *p;
  }
  throw ConfigError("network has no parameter block '" + std::string(name) + "'");
}

void Network::zero_grad() {
  for (Parameter* p : parameters()) std::fill(p->grad.begin(), p->grad.end(), 0.0);
}

}  // namespace texnet
