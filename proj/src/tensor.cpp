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

#include "texnet/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "texnet/error.hpp"

namespace texnet {
namespace {

std::size_t product(const std::vector<std::size_t>& shape) {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>());
}

}  // namespace

Tensor::Tensor(std::vector<std::size_t> shape, double fill)
    : shape_(std::move(shape)), data_(product(shape_), fill) {}

Tensor::Tensor(std::vector<std::size_t> shape, std::vector<double> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  if (data_.size() != product(shape_)) {
    throw ShapeError("Tensor: data length " + std::to_string(data_.size()) +
                     " does not match shape " + shape_string());
  }
}

Tensor Tensor::reshaped(std::vector<std::size_t> shape) const {
  return Tensor(std::move(shape), data_);
}

bool Tensor::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

std::string Tensor::shape_string() const {
  std::string s = "(";
  for (std::size_t i = 0; i < shape_.size(); ++i) {
    if (i) s += "x";
    s += std::to_string(shape_[i]);
  }
  return s + ")";
}

Tensor gather_rows(const Tensor& t, std::span<const std::size_t> index) {
  if (t.rank() == 0) throw ShapeError("gather_rows: scalar tensor");
  std::vector<std::size_t> shape = t.shape();
  shape[0] = index.size();
  Tensor out(shape);
  const std::size_t stride = t.stride0();
  for (std::size_t i = 0; i < index.size(); ++i) {
    if (index[i] >= t.dim(0)) throw ShapeError("gather_rows: index out of range");
    std::copy_n(t.data() + index[i] * stride, stride, out.data() + i * stride);
  }
  return out;
}

Tensor concat_axis1(std::span<const Tensor> parts) {
  if (parts.empty()) throw ShapeError("concat_axis1: nothing to concatenate");
  const std::size_t n = parts[0].dim(0);
  std::vector<std::size_t> shape = parts[0].shape();
  std::size_t total = 0;
  for (const Tensor& p : parts) {
    if (p.rank() != shape.size() || p.dim(0) != n) {
      throw ShapeError("concat_axis1: incompatible shapes " + parts[0].shape_string() + " and " +
                       p.shape_string());
    }
    for (std::size_t a = 2; a < shape.size(); ++a) {
      if (p.dim(a) != shape[a]) throw ShapeError("concat_axis1: trailing dimensions differ");
    }
    total += p.dim(1);
  }
  shape[1] = total;
  Tensor out(shape);
  double* dst = out.data();
  for (std::size_t i = 0; i < n; ++i) {
    for (const Tensor& p : parts) {
      const std::size_t stride = p.stride0();
      dst = std::copy_n(p.data() + i * stride, stride, dst);
    }
  }
  return out;
}

}  // namespace texnet
