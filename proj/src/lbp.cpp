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

#include "texnet/lbp.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <string>

#include "texnet/error.hpp"

namespace texnet {
namespace {

constexpr double kSnapTolerance = 1e-9;

double snap(double v) {
  const double r = std::round(v);
  return std::abs(v - r) < kSnapTolerance ? r : v;
}

// Rows/columns whose whole circle is inside [0, extent-1].
struct ValidRange {
  std::ptrdiff_t begin = 0;
  std::ptrdiff_t end = 0;  // exclusive
};

ValidRange valid_range(std::size_t extent, double min_off, double max_off) {
  const auto lo = static_cast<std::ptrdiff_t>(std::ceil(-min_off));
  const auto hi = static_cast<std::ptrdiff_t>(extent) - 1 -
                  static_cast<std::ptrdiff_t>(std::ceil(max_off));
  return {std::max<std::ptrdiff_t>(lo, 0), std::max<std::ptrdiff_t>(hi + 1, 0)};
}

void require_finite(const GrayImage& img) {
  if (img.height() == 0 || img.width() == 0) throw DataError("LBP: empty image");
  for (double v : img.pixels()) {
    if (!std::isfinite(v)) throw DataError("LBP: image contains non-finite pixels");
  }
}

}  // namespace

void LbpConfig::validate() const {
  if (points < 1 || points > 24) {
    throw ConfigError("lbp.points must be in [1, 24], got " + std::to_string(points));
  }
  if (!std::isfinite(radius) || radius <= 0.0) {
    throw ConfigError("lbp.radius must be a positive finite number");
  }
}

std::size_t LbpConfig::bin_count() const {
  switch (variant) {
    case LbpVariant::kRaw:
      return std::size_t{1} << points;
    case LbpVariant::kUniform2:
      return static_cast<std::size_t>(points) * (points - 1) + 3;
    case LbpVariant::kRotationInvariantUniform2:
      return static_cast<std::size_t>(points) + 2;
  }
  return 0;
}

std::string_view to_string(LbpVariant v) {
  switch (v) {
    case LbpVariant::kRaw: return "raw";
    case LbpVariant::kUniform2: return "uniform2";
    case LbpVariant::kRotationInvariantUniform2: return "rotation_invariant_uniform2";
  }
  return "?";
}

std::string_view to_string(Interpolation i) {
  return i == Interpolation::kNearest ? "nearest" : "bilinear";
}

LbpVariant parse_variant(std::string_view s) {
  if (s == "raw") return LbpVariant::kRaw;
  if (s == "uniform2" || s == "u2") return LbpVariant::kUniform2;
  if (s == "rotation_invariant_uniform2" || s == "riu2") {
    return LbpVariant::kRotationInvariantUniform2;
  }
  throw ConfigError("lbp.variant: unknown variant '" + std::string(s) + "'");
}

Interpolation parse_interpolation(std::string_view s) {
  if (s == "nearest") return Interpolation::kNearest;
  if (s == "bilinear") return Interpolation::kBilinear;
  throw ConfigError("lbp.interpolation: unknown mode '" + std::string(s) + "'");
}

std::vector<SampleOffset> sample_offsets(const LbpConfig& cfg) {
  cfg.validate();
  std::vector<SampleOffset> out(static_cast<std::size_t>(cfg.points));
  for (int p = 0; p < cfg.points; ++p) {
    const double angle = 2.0 * std::numbers::pi * p / cfg.points;
    out[p] = {snap(cfg.radius * std::sin(angle)), snap(cfg.radius * std::cos(angle))};
  }
  return out;
}

std::vector<simd::LbpTap> sample_taps(const LbpConfig& cfg) {
  std::vector<simd::LbpTap> taps;
  for (const SampleOffset& o : sample_offsets(cfg)) {
    simd::LbpTap t;
    if (cfg.interpolation == Interpolation::kNearest) {
      t.dy = static_cast<int>(std::lround(o.dy));
      t.dx = static_cast<int>(std::lround(o.dx));
    } else {
      const double fy = std::floor(o.dy);
      const double fx = std::floor(o.dx);
      t.dy = static_cast<int>(fy);
      t.dx = static_cast<int>(fx);
      t.fy = o.dy - fy;
      t.fx = o.dx - fx;
    }
    taps.push_back(t);
  }
  return taps;
}

std::vector<double> sample_circle(const GrayImage& img, std::size_t row, std::size_t col,
                                  const LbpConfig& cfg) {
  const auto offsets = sample_offsets(cfg);
  const auto taps = sample_taps(cfg);
  std::vector<double> out;
  out.reserve(taps.size());
  for (std::size_t p = 0; p < taps.size(); ++p) {
    const double y = static_cast<double>(row) + offsets[p].dy;
    const double x = static_cast<double>(col) + offsets[p].dx;
    if (y < 0.0 || x < 0.0 || y > static_cast<double>(img.height() - 1) ||
        x > static_cast<double>(img.width() - 1)) {
      throw DataError("sample_circle: neighbourhood of (" + std::to_string(row) + ", " +
                      std::to_string(col) + ") extends outside the image");
    }
    const simd::LbpTap& t = taps[p];
    const std::size_t y0 = row + t.dy;
    const std::size_t x0 = col + t.dx;
    double top = img.at(y0, x0);
    if (t.fx != 0.0) top = top + t.fx * (img.at(y0, x0 + 1) - top);
    double v = top;
    if (t.fy != 0.0) {
      double bot = img.at(y0 + 1, x0);
      if (t.fx != 0.0) bot = bot + t.fx * (img.at(y0 + 1, x0 + 1) - bot);
      v = top + t.fy * (bot - top);
    }
    out.push_back(v);
  }
  return out;
}

std::uint32_t lbp_code(std::span<const double> samples, double center) {
  std::uint32_t code = 0;
  for (std::size_t p = 0; p < samples.size(); ++p) {
    if (samples[p] - center >= 0.0) code |= 1u << p;
  }
  return code;
}

CodeImage::CodeImage(std::size_t height, std::size_t width, int points)
    : height_(height),
      width_(width),
      points_(points),
      codes_(height * width, 0),
      valid_(height * width, 0) {}

CodeImage compute_code_image_with(const GrayImage& img, const LbpConfig& cfg,
                                  const simd::KernelTable& kernels) {
  cfg.validate();
  require_finite(img);
  const auto offsets = sample_offsets(cfg);
  const auto taps = sample_taps(cfg);
  auto [min_dy, max_dy] = std::minmax_element(
      offsets.begin(), offsets.end(), [](auto& a, auto& b) { return a.dy < b.dy; });
  auto [min_dx, max_dx] = std::minmax_element(
      offsets.begin(), offsets.end(), [](auto& a, auto& b) { return a.dx < b.dx; });
  const ValidRange rows = valid_range(img.height(), min_dy->dy, max_dy->dy);
  const ValidRange cols = valid_range(img.width(), min_dx->dx, max_dx->dx);
  if (rows.begin >= rows.end || cols.begin >= cols.end) {
    throw DataError("LBP: image " + std::to_string(img.height()) + "x" +
                    std::to_string(img.width()) + " is too small for radius " +
                    std::to_string(cfg.radius) + " (no valid pixels)");
  }

  CodeImage out(img.height(), img.width(), cfg.points);
  const double* data = img.pixels().data();
  for (auto r = rows.begin; r < rows.end; ++r) {
    const std::size_t row = static_cast<std::size_t>(r);
    kernels.lbp_codes_row(data, img.width(), row, static_cast<std::size_t>(cols.begin),
                          static_cast<std::size_t>(cols.end), taps.data(), taps.size(),
                          out.codes_.data() + row * img.width());
    std::fill(out.valid_.begin() + row * img.width() + cols.begin,
              out.valid_.begin() + row * img.width() + cols.end, std::uint8_t{1});
  }
  out.valid_count_ = static_cast<std::size_t>((rows.end - rows.begin) * (cols.end - cols.begin));
  return out;
}

CodeImage compute_code_image(const GrayImage& img, const LbpConfig& cfg) {
  return compute_code_image_with(img, cfg, simd::active());
}

int circular_transitions(std::uint32_t code, int points) {
  const std::uint32_t mask = points >= 32 ? ~0u : (1u << points) - 1;
  const std::uint32_t rotated = ((code >> 1) | (code << (points - 1))) & mask;
  return std::popcount((code ^ rotated) & mask);
}

std::uint32_t reduce_code(std::uint32_t code, const LbpConfig& cfg) {
  switch (cfg.variant) {
    case LbpVariant::kRaw:
      return code;
    case LbpVariant::kUniform2:
      return circular_transitions(code, cfg.points) <= 2 ? code : cfg.code_count();
    case LbpVariant::kRotationInvariantUniform2:
      return circular_transitions(code, cfg.points) <= 2
                 ? static_cast<std::uint32_t>(std::popcount(code))
                 : static_cast<std::uint32_t>(cfg.points + 1);
  }
  return code;
}

CodeBinner::CodeBinner(const LbpConfig& cfg) : cfg_(cfg), bin_count_(cfg.bin_count()) {
  cfg.validate();
  if (cfg.variant == LbpVariant::kUniform2) {
    // 0, all-ones, and every circular run of k ones (1 <= k < P) at each start.
    const std::uint32_t mask = cfg.code_count() - 1;
    uniform_codes_.push_back(0);
    uniform_codes_.push_back(mask);
    for (int k = 1; k < cfg.points; ++k) {
      const std::uint32_t run = (1u << k) - 1;
      for (int s = 0; s < cfg.points; ++s) {
        const std::uint32_t code =
            ((run << s) | (s == 0 ? 0u : run >> (cfg.points - s))) & mask;
        uniform_codes_.push_back(code);
      }
    }
    std::sort(uniform_codes_.begin(), uniform_codes_.end());
    uniform_codes_.erase(std::unique(uniform_codes_.begin(), uniform_codes_.end()),
                         uniform_codes_.end());
    bin_count_ = uniform_codes_.size() + 1;
  }
}

std::size_t CodeBinner::bin(std::uint32_t code) const {
  switch (cfg_.variant) {
    case LbpVariant::kRaw:
      return code;
    case LbpVariant::kUniform2: {
      auto it = std::lower_bound(uniform_codes_.begin(), uniform_codes_.end(), code);
      if (it != uniform_codes_.end() && *it == code) {
        return static_cast<std::size_t>(it - uniform_codes_.begin());
      }
      return uniform_codes_.size();
    }
    case LbpVariant::kRotationInvariantUniform2:
      return reduce_code(code, cfg_);
  }
  return 0;
}

CodeHistogram pool_histogram(const CodeImage& codes, const LbpConfig& cfg) {
  if (codes.points() != cfg.points) {
    throw ConfigError("pool_histogram: code image has P=" + std::to_string(codes.points()) +
                      ", config has P=" + std::to_string(cfg.points));
  }
  if (codes.valid_count() == 0) throw DataError("pool_histogram: no valid pixels");
  const CodeBinner binner(cfg);
  CodeHistogram h{cfg.variant, cfg.points, std::vector<double>(binner.bin_count(), 0.0)};
  auto mask = codes.valid_mask();
  auto values = codes.codes();
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (mask[i]) h.bins[binner.bin(values[i])] += 1.0;
  }
  const double inv = 1.0 / static_cast<double>(codes.valid_count());
  for (double& b : h.bins) b *= inv;
  return h;
}

}  // namespace texnet
