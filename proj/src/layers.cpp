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

#include "texnet/layers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "texnet/error.hpp"
#include "texnet/simd/kernels.hpp"

namespace texnet {
namespace {

void he_uniform(std::vector<double>& w, std::size_t fan_in, double gain, std::mt19937_64& rng) {
  const double limit = gain * std::sqrt(6.0 / static_cast<double>(fan_in));
  std::uniform_real_distribution<double> dist(-limit, limit);
  for (double& v : w) v = dist(rng);
}

}  // namespace

Parameter::Parameter(std::string n, std::vector<std::size_t> s, bool d)
    : name(std::move(n)), shape(std::move(s)), decay(d) {
  std::size_t count = 1;
  for (std::size_t x : shape) count *= x;
  value.assign(count, 0.0);
  grad.assign(count, 0.0);
}

// ---------------------------------------------------------------- Conv2d

Conv2d::Conv2d(std::string name, std::size_t in_channels, std::size_t filters, std::size_t kernel,
               std::size_t stride)
    : in_channels_(in_channels),
      filters_(filters),
      kernel_(kernel),
      stride_(stride),
      pad_(kernel / 2),
      weight_(name + ".weight", {filters, in_channels * kernel * kernel}, true),
      bias_(name + ".bias", {filters}, false) {
  if (in_channels == 0 || filters == 0 || kernel == 0 || stride == 0) {
    throw ConfigError("conv layer '" + name + "': sizes must be positive");
  }
}

std::size_t Conv2d::output_side(std::size_t input_side) const {
  if (input_side + 2 * pad_ < kernel_) return 0;
  return (input_side + 2 * pad_ - kernel_) / stride_ + 1;
}

void Conv2d::init(std::mt19937_64& rng) {
  he_uniform(weight_.value, in_channels_ * kernel_ * kernel_, 1.0, rng);
  std::fill(bias_.value.begin(), bias_.value.end(), 0.0);
}

Tensor Conv2d::forward(const Tensor& x) {
  if (x.rank() != 4 || x.dim(1) != in_channels_) {
    throw ShapeError("conv: expected input (N x " + std::to_string(in_channels_) +
                     " x H x W), got " + x.shape_string());
  }
  const auto& k = simd::active();
  const std::size_t n = x.dim(0), h = x.dim(2), w = x.dim(3);
  out_h_ = output_side(h);
  out_w_ = output_side(w);
  if (out_h_ == 0 || out_w_ == 0) throw ShapeError("conv: input too small for kernel");
  in_shape_ = x.shape();
  const std::size_t ckk = in_channels_ * kernel_ * kernel_;
  const std::size_t hw = out_h_ * out_w_;
  cols_.assign(n * ckk * hw, 0.0);
  Tensor y({n, filters_, out_h_, out_w_});
  for (std::size_t s = 0; s < n; ++s) {
    const double* xs = x.data() + s * x.stride0();
    double* cols = cols_.data() + s * ckk * hw;
    for (std::size_t c = 0; c < in_channels_; ++c) {
      for (std::size_t ky = 0; ky < kernel_; ++ky) {
        for (std::size_t kx = 0; kx < kernel_; ++kx) {
          double* row = cols + ((c * kernel_ + ky) * kernel_ + kx) * hw;
          for (std::size_t oy = 0; oy < out_h_; ++oy) {
            const std::ptrdiff_t iy = static_cast<std::ptrdiff_t>(oy * stride_ + ky) -
                                      static_cast<std::ptrdiff_t>(pad_);
            if (iy < 0 || iy >= static_cast<std::ptrdiff_t>(h)) continue;
            for (std::size_t ox = 0; ox < out_w_; ++ox) {
              const std::ptrdiff_t ix = static_cast<std::ptrdiff_t>(ox * stride_ + kx) -
                                        static_cast<std::ptrdiff_t>(pad_);
              if (ix < 0 || ix >= static_cast<std::ptrdiff_t>(w)) continue;
              row[oy * out_w_ + ox] = xs[(c * h + iy) * w + ix];
            }
          }
        }
      }
    }
    double* ys = y.data() + s * y.stride0();
    for (std::size_t f = 0; f < filters_; ++f) std::fill_n(ys + f * hw, hw, bias_.value[f]);
    k.gemm(filters_, hw, ckk, weight_.value.data(), ckk, cols, hw, ys, hw);
  }
  return y;
}

Tensor Conv2d::backward(const Tensor& dy) {
  const auto& k = simd::active();
  const std::size_t n = in_shape_[0], h = in_shape_[2], w = in_shape_[3];
  const std::size_t ckk = in_channels_ * kernel_ * kernel_;
  const std::size_t hw = out_h_ * out_w_;
  if (dy.size() != n * filters_ * hw) throw ShapeError("conv backward: gradient shape mismatch");

  // W^T (ckk x filters) for the input gradient.
  std::vector<double> wt(ckk * filters_);
  for (std::size_t f = 0; f < filters_; ++f) {
    for (std::size_t j = 0; j < ckk; ++j) wt[j * filters_ + f] = weight_.value[f * ckk + j];
  }
  std::vector<double> cols_t(hw * ckk);
  std::vector<double> dcols(ckk * hw);
  Tensor dx(in_shape_);
  for (std::size_t s = 0; s < n; ++s) {
    const double* dys = dy.data() + s * filters_ * hw;
    const double* cols = cols_.data() + s * ckk * hw;
    for (std::size_t f = 0; f < filters_; ++f) {
      double acc = 0.0;
      for (std::size_t i = 0; i < hw; ++i) acc += dys[f * hw + i];
      bias_.grad[f] += acc;
    }
    for (std::size_t j = 0; j < ckk; ++j) {
      for (std::size_t i = 0; i < hw; ++i) cols_t[i * ckk + j] = cols[j * hw + i];
    }
    k.gemm(filters_, ckk, hw, dys, hw, cols_t.data(), ckk, weight_.grad.data(), ckk);

    std::fill(dcols.begin(), dcols.end(), 0.0);
    k.gemm(ckk, hw, filters_, wt.data(), filters_, dys, hw, dcols.data(), hw);
    double* dxs = dx.data() + s * dx.stride0();
    for (std::size_t c = 0; c < in_channels_; ++c) {
      for (std::size_t ky = 0; ky < kernel_; ++ky) {
        for (std::size_t kx = 0; kx < kernel_; ++kx) {
          const double* row = dcols.data() + ((c * kernel_ + ky) * kernel_ + kx) * hw;
          for (std::size_t oy = 0; oy < out_h_; ++oy) {
            const std::ptrdiff_t iy = static_cast<std::ptrdiff_t>(oy * stride_ + ky) -
                                      static_cast<std::ptrdiff_t>(pad_);
            if (iy < 0 || iy >= static_cast<std::ptrdiff_t>(h)) continue;
            for (std::size_t ox = 0; ox < out_w_; ++ox) {
              const std::ptrdiff_t ix = static_cast<std::ptrdiff_t>(ox * stride_ + kx) -
                                        static_cast<std::ptrdiff_t>(pad_);
              if (ix < 0 || ix >= static_cast<std::ptrdiff_t>(w)) continue;
              dxs[(c * h + iy) * w + ix] += row[oy * out_w_ + ox];
            }
          }
        }
      }
    }
  }
  return dx;
}

// ---------------------------------------------------------------- ReLU

Tensor Relu::forward(const Tensor& x) {
  shape_ = x.shape();
  active_.resize(x.size());
  Tensor y(x.shape());
  for (std::size_t i = 0; i < x.size(); ++i) {
    active_[i] = x[i] > 0.0;
    y[i] = active_[i] ? x[i] : 0.0;
  }
  return y;
}

Tensor Relu::backward(const Tensor& dy) {
  if (dy.size() != active_.size()) throw ShapeError("relu backward: gradient shape mismatch");
  Tensor dx(shape_);
  for (std::size_t i = 0; i < dy.size(); ++i) dx[i] = active_[i] ? dy[i] : 0.0;
  return dx;
}

// ---------------------------------------------------------------- MaxPool2d

Tensor MaxPool2d::forward(const Tensor& x) {
  if (x.rank() != 4) throw ShapeError("maxpool: expected N x C x H x W, got " + x.shape_string());
  in_shape_ = x.shape();
  const std::size_t n = x.dim(0), c = x.dim(1), h = x.dim(2), w = x.dim(3);
  const std::size_t oh = h / size_, ow = w / size_;
  if (oh == 0 || ow == 0) throw ShapeError("maxpool: input smaller than the pooling window");
  Tensor y({n, c, oh, ow});
  argmax_.resize(y.size());
  std::size_t o = 0;
  for (std::size_t plane = 0; plane < n * c; ++plane) {
    const double* src = x.data() + plane * h * w;
    for (std::size_t oy = 0; oy < oh; ++oy) {
      for (std::size_t ox = 0; ox < ow; ++ox, ++o) {
        std::size_t best = (oy * size_) * w + ox * size_;
        for (std::size_t dy = 0; dy < size_; ++dy) {
          for (std::size_t dx = 0; dx < size_; ++dx) {
            const std::size_t idx = (oy * size_ + dy) * w + ox * size_ + dx;
            if (src[idx] > src[best]) best = idx;
          }
        }
        y[o] = src[best];
        argmax_[o] = plane * h * w + best;
      }
    }
  }
  return y;
}

Tensor MaxPool2d::backward(const Tensor& dy) {
  if (dy.size() != argmax_.size()) throw ShapeError("maxpool backward: gradient shape mismatch");
  Tensor dx(in_shape_);
  for (std::size_t i = 0; i < dy.size(); ++i) dx[argmax_[i]] += dy[i];
  return dx;
}

// ---------------------------------------------------------------- Dense

Dense::Dense(std::string name, std::size_t in, std::size_t out)
    : in_(in),
      out_(out),
      weight_(name + ".weight", {out, in}, true),
      bias_(name + ".bias", {out}, false) {
  if (in == 0 || out == 0) throw ConfigError("dense layer '" + name + "': sizes must be positive");
}

void Dense::init(std::mt19937_64& rng, double gain) {
  he_uniform(weight_.value, in_, gain, rng);
  std::fill(bias_.value.begin(), bias_.value.end(), 0.0);
}

Tensor Dense::forward(const Tensor& x) {
  if (x.rank() == 0 || x.stride0() != in_) {
    throw ShapeError("dense: expected " + std::to_string(in_) + " features per sample, got " +
                     x.shape_string());
  }
  const auto& k = simd::active();
  in_shape_ = x.shape();
  input_ = x.reshaped({x.dim(0), in_});
  const std::size_t n = x.dim(0);
  Tensor y({n, out_});
  for (std::size_t s = 0; s < n; ++s) {
    const double* xs = input_.data() + s * in_;
    for (std::size_t o = 0; o < out_; ++o) {
      y[s * out_ + o] = bias_.value[o] + k.dot(weight_.value.data() + o * in_, xs, in_);
    }
  }
  return y;
}

Tensor Dense::backward(const Tensor& dy) {
  const auto& k = simd::active();
  const std::size_t n = input_.dim(0);
  if (dy.size() != n * out_) throw ShapeError("dense backward: gradient shape mismatch");
  Tensor dx({n, in_});
  for (std::size_t s = 0; s < n; ++s) {
    const double* xs = input_.data() + s * in_;
    double* dxs = dx.data() + s * in_;
    for (std::size_t o = 0; o < out_; ++o) {
      const double g = dy[s * out_ + o];
      if (g == 0.0) continue;
      bias_.grad[o] += g;
      k.axpy(g, xs, weight_.grad.data() + o * in_, in_);
      k.axpy(g, weight_.value.data() + o * in_, dxs, in_);
    }
  }
  return dx.reshaped(in_shape_);
}

// ---------------------------------------------------------------- loss

Tensor softmax(const Tensor& logits) {
  if (logits.rank() != 2) throw ShapeError("softmax: expected N x classes");
  const std::size_t n = logits.dim(0), c = logits.dim(1);
  Tensor p(logits.shape());
  for (std::size_t s = 0; s < n; ++s) {
    const double* z = logits.data() + s * c;
    const double m = *std::max_element(z, z + c);
    double sum = 0.0;
    for (std::size_t j = 0; j < c; ++j) sum += std::exp(z[j] - m);
    for (std::size_t j = 0; j < c; ++j) p[s * c + j] = std::exp(z[j] - m) / sum;
  }
  return p;
}

LossResult softmax_cross_entropy(const Tensor& logits, std::span<const int> labels) {
  if (logits.rank() != 2 || logits.dim(0) != labels.size()) {
    throw ShapeError("softmax_cross_entropy: " + std::to_string(labels.size()) +
                     " labels for logits " + logits.shape_string());
  }
  const std::size_t n = logits.dim(0), c = logits.dim(1);
  for (int y : labels) {
    if (y < 0 || static_cast<std::size_t>(y) >= c) {
      throw DataError("label " + std::to_string(y) + " outside [0, " + std::to_string(c) + ")");
    }
  }
  LossResult r{0.0, softmax(logits)};
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t s = 0; s < n; ++s) {
    const double* z = logits.data() + s * c;
    const double m = *std::max_element(z, z + c);
    double sum = 0.0;
    for (std::size_t j = 0; j < c; ++j) sum += std::exp(z[j] - m);
    r.loss += (std::log(sum) + m - z[labels[s]]) * inv_n;
    for (std::size_t j = 0; j < c; ++j) r.dlogits[s * c + j] *= inv_n;
    r.dlogits[s * c + labels[s]] -= inv_n;
  }
  return r;
}

}  // namespace texnet
