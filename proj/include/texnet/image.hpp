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

namespace texnet {

// Single-channel intensity raster, row-major, values in [0,1].
class GrayImage {
 public:
  GrayImage() = default;
  GrayImage(std::size_t height, std::size_t width, double fill = 0.0);
  GrayImage(std::size_t height, std::size_t width, std::vector<double> pixels);

  std::size_t height() const noexcept { return height_; }
  std::size_t width() const noexcept { return width_; }
  bool empty() const noexcept { return pixels_.empty(); }

  double at(std::size_t row, std::size_t col) const { return pixels_[row * width_ + col]; }
  double& at(std::size_t row, std::size_t col) { return pixels_[row * width_ + col]; }

  std::span<const double> pixels() const noexcept { return pixels_; }
  std::span<double> pixels() noexcept { return pixels_; }

  // Throws DataError unless dimensions are positive and every pixel is finite in [0,1].
  void validate() const;

  friend bool operator==(const GrayImage&, const GrayImage&) = default;

 private:
  std::size_t height_ = 0;
  std::size_t width_ = 0;
  std::vector<double> pixels_;
};

// Interleaved RGB raster, values in [0,1].
class ColorImage {
 public:
  ColorImage() = default;
  ColorImage(std::size_t height, std::size_t width, double fill = 0.0);
  ColorImage(std::size_t height, std::size_t width, std::vector<double> rgb);

  std::size_t height() const noexcept { return height_; }
  std::size_t width() const noexcept { return width_; }

  double at(std::size_t row, std::size_t col, std::size_t channel) const {
    return rgb_[(row * width_ + col) * 3 + channel];
  }
  double& at(std::size_t row, std::size_t col, std::size_t channel) {
    return rgb_[(row * width_ + col) * 3 + channel];
  }

  std::span<const double> data() const noexcept { return rgb_; }

  friend bool operator==(const ColorImage&, const ColorImage&) = default;

 private:
  std::size_t height_ = 0;
  std::size_t width_ = 0;
  std::vector<double> rgb_;
};

// Luminance 0.299 R + 0.587 G + 0.114 B.
GrayImage to_gray(const ColorImage& img);

// Gray replicated into three channels.
ColorImage to_color(const GrayImage& img);

// Applies f to every pixel; used for intensity transforms.
template <typename F>
GrayImage map_pixels(const GrayImage& img, F&& f) {
  GrayImage out = img;
  for (double& v : out.pixels()) v = f(v);
  return out;
}

// Resamples an interleaved multi-channel plane stack to side x side. Integer
// down-scaling factors average whole blocks; other ratios use nearest neighbour.
std::vector<double> resize_planes(std::span<const double> interleaved, std::size_t height,
                                  std::size_t width, std::size_t channels, std::size_t side);

}  // namespace texnet
