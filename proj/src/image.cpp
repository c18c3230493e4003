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

#include "texnet/image.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "texnet/error.hpp"

namespace texnet {

GrayImage::GrayImage(std::size_t height, std::size_t width, double fill)
    : height_(height), width_(width), pixels_(height * width, fill) {}

GrayImage::GrayImage(std::size_t height, std::size_t width, std::vector<double> pixels)
    : height_(height), width_(width), pixels_(std::move(pixels)) {
  if (pixels_.size() != height * width) {
    throw ShapeError("GrayImage: expected " + std::to_string(height * width) +
                     " pixels, got " + std::to_string(pixels_.size()));
  }
}

void GrayImage::validate() const {
  if (height_ == 0 || width_ == 0) throw DataError("GrayImage: zero-sized image");
  for (double v : pixels_) {
    if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
      throw DataError("GrayImage: pixel value outside [0,1]");
    }
  }
}

ColorImage::ColorImage(std::size_t height, std::size_t width, double fill)
    : height_(height), width_(width), rgb_(height * width * 3, fill) {}

ColorImage::ColorImage(std::size_t height, std::size_t width, std::vector<double> rgb)
    : height_(height), width_(width), rgb_(std::move(rgb)) {
  if (rgb_.size() != height * width * 3) {
    throw ShapeError("ColorImage: expected " + std::to_string(height * width * 3) +
                     " samples, got " + std::to_string(rgb_.size()));
  }
}

GrayImage to_gray(const ColorImage& img) {
  GrayImage out(img.height(), img.width());
  auto src = img.data();
  auto dst = out.pixels();
  for (std::size_t i = 0; i < dst.size(); ++i) {
    dst[i] = 0.299 * src[3 * i] + 0.587 * src[3 * i + 1] + 0.114 * src[3 * i + 2];
  }
  return out;
}

ColorImage to_color(const GrayImage& img) {
  ColorImage out(img.height(), img.width());
  for (std::size_t r = 0; r < img.height(); ++r) {
    for (std::size_t c = 0; c < img.width(); ++c) {
      for (std::size_t ch = 0; ch < 3; ++ch) out.at(r, c, ch) = img.at(r, c);
    }
  }
  return out;
}

std::vector<double> resize_planes(std::span<const double> interleaved, std::size_t height,
                                  std::size_t width, std::size_t channels, std::size_t side) {
  if (interleaved.size() != height * width * channels) {
    throw ShapeError("resize_planes: buffer does not match dimensions");
  }
  std::vector<double> out(side * side * channels, 0.0);
  if (height == side && width == side) {
    out.assign(interleaved.begin(), interleaved.end());
    return out;
  }
  const bool block = height % side == 0 && width % side == 0;
  if (block) {
    const std::size_t fy = height / side;
    const std::size_t fx = width / side;
    const double inv = 1.0 / static_cast<double>(fy * fx);
    for (std::size_t r = 0; r < side; ++r) {
      for (std::size_t c = 0; c < side; ++c) {
        for (std::size_t ch = 0; ch < channels; ++ch) {
          double acc = 0.0;
          for (std::size_t y = r * fy; y < (r + 1) * fy; ++y) {
            for (std::size_t x = c * fx; x < (c + 1) * fx; ++x) {
              acc += interleaved[(y * width + x) * channels + ch];
            }
          }
          out[(r * side + c) * channels + ch] = acc * inv;
        }
      }
    }
    return out;
  }
  for (std::size_t r = 0; r < side; ++r) {
    const std::size_t y = std::min(height - 1, (2 * r + 1) * height / (2 * side));
    for (std::size_t c = 0; c < side; ++c) {
      const std::size_t x = std::min(width - 1, (2 * c + 1) * width / (2 * side));
      for (std::size_t ch = 0; ch < channels; ++ch) {
        out[(r * side + c) * channels + ch] = interleaved[(y * width + x) * channels + ch];
      }
    }
  }
  return out;
}

}  // namespace texnet
