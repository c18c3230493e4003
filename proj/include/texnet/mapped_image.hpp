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
#include <filesystem>
#include <span>
#include <vector>

#include "texnet/image.hpp"
#include "texnet/image_io.hpp"
#include "texnet/lbp.hpp"
#include "texnet/mds.hpp"

namespace texnet {

// Texture-coded image: each pixel replaced by the normalised embedding point
// of its raw LBP code. Interleaved channels, values in [0,1].
struct MappedImage {
  std::size_t height = 0;
  std::size_t width = 0;
  int channels = 0;
  std::vector<double> values;
  std::vector<std::uint8_t> valid;

  double at(std::size_t row, std::size_t col, int ch) const {
    return values[(row * width + col) * channels + ch];
  }

  friend bool operator==(const MappedImage&, const MappedImage&) = default;
};

// Pixels with an incomplete neighbourhood take the point of this code (2^P - 1).
std::uint32_t border_fill_code(int points);

// Normalised lookup table shared across many images.
class CodeMapper {
 public:
  // Throws ConfigError if cfg.variant is not raw or the embedding was built
  // for a different P.
  CodeMapper(const CodeEmbedding& emb, const LbpConfig& cfg);

  MappedImage encode(const GrayImage& img) const;
  MappedImage encode(const ColorImage& img) const { return encode(to_gray(img)); }

  const CodeEmbedding& table() const noexcept { return table_; }
  const LbpConfig& config() const noexcept { return cfg_; }

 private:
  CodeEmbedding table_;
  LbpConfig cfg_;
};

MappedImage encode_image(const GrayImage& img, const CodeEmbedding& emb, const LbpConfig& cfg);
MappedImage encode_image(const ColorImage& img, const CodeEmbedding& emb, const LbpConfig& cfg);

// Keeps the first (largest-eigenvalue) dimension. Under the global embedding
// normalisation that channel is already in [0,1]; values are clamped to it.
MappedImage collapse_to_single_channel(const MappedImage& m);

// 8-bit quantisation (round(v * 255)) for the on-disk cache, and back.
Raster to_raster(const MappedImage& m);
MappedImage mapped_from_raster(const Raster& r);

struct BatchEncodeOptions {
  bool force = false;
  bool single_channel = false;  // write collapsed 1-channel PGMs
  unsigned threads = 1;
};

struct BatchEncodeResult {
  std::size_t found = 0;
  std::size_t written = 0;
  std::size_t skipped = 0;  // already encoded
  std::size_t failed = 0;   // unreadable inputs
};

// Mirrors a folder-per-class dataset into `output_root` as mapped images
// (.png for 3 channels, .pgm for 1) and writes `encoding.json` with
// {P, R, D, variant, interpolation, embedding_checksum}. Existing outputs are
// kept unless `force` is set or the sidecar describes a different encoding.
// Throws DataError when no images are found.
BatchEncodeResult batch_encode(const std::filesystem::path& dataset_root,
                               const CodeEmbedding& emb, const LbpConfig& cfg,
                               const std::filesystem::path& output_root,
                               const BatchEncodeOptions& options = {});

// Relative path of the cached mapped image for a dataset file.
std::filesystem::path mapped_relative_path(const std::filesystem::path& relative,
                                           bool single_channel);

}  // namespace texnet
