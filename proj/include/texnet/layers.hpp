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
#include <memory>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "texnet/tensor.hpp"

namespace texnet {

struct Parameter {
  std::string name;
  std::vector<std::size_t> shape;
  std::vector<double> value;
  std::vector<double> grad;
  bool decay = true;  // weight decay applies (weights yes, biases no)

  Parameter(std::string n, std::vector<std::size_t> s, bool d);
  std::size_t size() const noexcept { return value.size(); }
};

// Layers cache what backward() needs from the most recent forward().
class Layer {
 public:
  virtual ~Layer() = default;
  virtual Tensor forward(const Tensor& x) = 0;
  // Accumulates parameter gradients and returns d(loss)/d(input).
  virtual Tensor backward(const Tensor& dy) = 0;
  virtual std::vector<Parameter*> parameters() { return {}; }
  virtual std::string kind() const = 0;
};

// Square kernel, zero padding kernel/2, arbitrary stride. Weights are
// filters x (channels * kernel * kernel).
class Conv2d final : public Layer {
 public:
  Conv2d(std::string name, std::size_t in_channels, std::size_t filters, std::size_t kernel,
         std::size_t stride);
  Tensor forward(const Tensor& x) override;
  Tensor backward(const Tensor& dy) override;
  std::vector<Parameter*> parameters() override { return {&weight_, &bias_}; }
  std::string kind() const override { return "conv"; }

  std::size_t output_side(std::size_t input_side) const;
  void init(std::mt19937_64& rng);

 private:
  std::size_t in_channels_, filters_, kernel_, stride_, pad_;
  Parameter weight_, bias_;
  std::vector<std::size_t> in_shape_;
  std::size_t out_h_ = 0, out_w_ = 0;
  std::vector<double> cols_;  // per-sample im2col buffers, back to back
};

class Relu final : public Layer {
 public:
  Tensor forward(const Tensor& x) override;
  Tensor backward(const Tensor& dy) override;
  std::string kind() const override { return "relu"; }

 private:
  std::vector<unsigned char> active_;
  std::vector<std::size_t> shape_;
};

// size x size window, stride size, floor division of the spatial extent.
class MaxPool2d final : public Layer {
 public:
  explicit MaxPool2d(std::size_t size) : size_(size) {}
  Tensor forward(const Tensor& x) override;
  Tensor backward(const Tensor& dy) override;
  std::string kind() const override { return "maxpool"; }

 private:
  std::size_t size_;
  std::vector<std::size_t> in_shape_;
  std::vector<std::size_t> argmax_;
};

// y = W x + b on the flattened trailing axes; output N x out.
class Dense final : public Layer {
 public:
  Dense(std::string name, std::size_t in, std::size_t out);
  Tensor forward(const Tensor& x) override;
  Tensor backward(const Tensor& dy) override;
  std::vector<Parameter*> parameters() override { return {&weight_, &bias_}; }
  std::string kind() const override { return "dense"; }

  // He-uniform scaled by `gain`.
  void init(std::mt19937_64& rng, double gain = 1.0);
  std::size_t in_features() const noexcept { return in_; }
  std::size_t out_features() const noexcept { return out_; }

 private:
  std::size_t in_, out_;
  Parameter weight_, bias_;
  std::vector<std::size_t> in_shape_;
  Tensor input_;
};

struct LossResult {
  double loss = 0.0;  // mean over the batch
  Tensor dlogits;
};

// Mean softmax cross-entropy and its gradient w.r.t. the logits.
LossResult softmax_cross_entropy(const Tensor& logits, std::span<const int> labels);

Tensor softmax(const Tensor& logits);

}  // namespace texnet
