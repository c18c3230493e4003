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
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "texnet/image.hpp"
#include "texnet/simd/kernels.hpp"

namespace texnet {

enum class LbpVariant {
  kRaw,                        // 2^P codes
  kUniform2,                   // uniform codes kept, the rest pooled (59 bins at P=8)
  kRotationInvariantUniform2,  // popcount of uniform codes, P+1 otherwise (P+2 bins)
};

// How a sample point that falls between pixel centres is read.
enum class Interpolation {
  kNearest,   // nearest pixel; codes depend only on intensity order
  kBilinear,  // bilinear blend of the four surrounding pixels
};

struct LbpConfig {
  int points = 8;
  double radius = 1.0;
  LbpVariant variant = LbpVariant::kRaw;
  Interpolation interpolation = Interpolation::kNearest;

  // Throws ConfigError unless 1 <= points <= 24 and radius is finite and > 0.
  void validate() const;
  std::uint32_t code_count() const { return 1u << points; }
  std::size_t bin_count() const;

  friend bool operator==(const LbpConfig&, const LbpConfig&) = default;
};

std::string_view to_string(LbpVariant v);
std::string_view to_string(Interpolation i);
LbpVariant parse_variant(std::string_view s);
Interpolation parse_interpolation(std::string_view s);

// Position of sample p relative to the centre: angle 2*pi*p/P from the +x
// (column) axis, rows growing downward. Offsets within 1e-9 of an integer are
// snapped onto it so axis-aligned samples hit pixel centres exactly.
struct SampleOffset {
  double dy = 0.0;
  double dx = 0.0;
};
std::vector<SampleOffset> sample_offsets(const LbpConfig& cfg);

// Kernel taps for the configured interpolation.
std::vector<simd::LbpTap> sample_taps(const LbpConfig& cfg);

// The P neighbourhood intensities around (row, col). Throws DataError when a
// sample point lies outside the image.
std::vector<double> sample_circle(const GrayImage& img, std::size_t row, std::size_t col,
                                  const LbpConfig& cfg);

// sum_p s(samples[p] - center) 2^p with s(t) = 1 iff t >= 0.
std::uint32_t lbp_code(std::span<const double> samples, double center);

class CodeImage {
 public:
  CodeImage() = default;
  CodeImage(std::size_t height, std::size_t width, int points);

  std::size_t height() const noexcept { return height_; }
  std::size_t width() const noexcept { return width_; }
  int points() const noexcept { return points_; }

  std::uint32_t code(std::size_t row, std::size_t col) const { return codes_[row * width_ + col]; }
  bool valid(std::size_t row, std::size_t col) const { return valid_[row * width_ + col] != 0; }
  std::size_t valid_count() const noexcept { return valid_count_; }

  std::span<const std::uint32_t> codes() const noexcept { return codes_; }
  std::span<const std::uint8_t> valid_mask() const noexcept { return valid_; }

  friend bool operator==(const CodeImage&, const CodeImage&) = default;

 private:
  friend CodeImage compute_code_image(const GrayImage&, const LbpConfig&);
  friend CodeImage compute_code_image_with(const GrayImage&, const LbpConfig&,
                                           const simd::KernelTable&);
  std::size_t height_ = 0;
  std::size_t width_ = 0;
  int points_ = 0;
  std::size_t valid_count_ = 0;
  std::vector<std::uint32_t> codes_;
  std::vector<std::uint8_t> valid_;
};

// Per-pixel raw codes. Pixels whose circle leaves the image are marked invalid
// (code 0). Throws DataError if no pixel has a complete neighbourhood.
CodeImage compute_code_image(const GrayImage& img, const LbpConfig& cfg);
// Same, with an explicit kernel table (equivalence tests).
CodeImage compute_code_image_with(const GrayImage& img, const LbpConfig& cfg,
                                  const simd::KernelTable& kernels);

// Number of circular 0/1 transitions in a P-bit code.
int circular_transitions(std::uint32_t code, int points);

// Label of a code under cfg.variant: raw and uniform codes map to themselves,
// non-uniform codes to 2^P (uniform2) or P+1 (riu2); riu2 uniform codes to
// their popcount.
std::uint32_t reduce_code(std::uint32_t code, const LbpConfig& cfg);

// Dense histogram bin index in [0, cfg.bin_count()).
class CodeBinner {
 public:
  explicit CodeBinner(const LbpConfig& cfg);
  std::size_t bin(std::uint32_t code) const;
  std::size_t bin_count() const noexcept { return bin_count_; }

 private:
  LbpConfig cfg_;
  std::size_t bin_count_ = 0;
  std::vector<std::uint32_t> uniform_codes_;  // ascending
};

struct CodeHistogram {
  LbpVariant variant = LbpVariant::kRaw;
  int points = 8;
  std::vector<double> bins;  // sums to 1
};

// Normalised histogram of reduced codes over valid pixels. Throws DataError
// when there are none.
CodeHistogram pool_histogram(const CodeImage& codes, const LbpConfig& cfg);

}  // namespace texnet
