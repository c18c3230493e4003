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
#include <filesystem>
#include <string>
#include <vector>

#include "texnet/image.hpp"

namespace texnet {

// Integer raster as stored on disk: 1 (gray) or 3 (RGB) interleaved channels,
// samples in [0, maxval]. maxval is 255 or 65535.
struct Raster {
  std::size_t height = 0;
  std::size_t width = 0;
  std::size_t channels = 1;
  std::uint32_t maxval = 255;
  std::vector<std::uint16_t> samples;
  // Written as '#' comment lines in PNM headers and tEXt chunks in PNG.
  std::vector<std::string> comments;
};

// PNG (8/16-bit gray, gray+alpha, RGB, RGBA, palette) and binary PGM/PPM.
// Alpha is dropped. Throws IoError naming the path on any failure.
Raster read_raster(const std::filesystem::path& path);

// Format chosen by extension: .png, .pgm (1 channel), .ppm (3 channels).
void write_raster(const std::filesystem::path& path, const Raster& raster);

// Intensities normalised by maxval. Color rasters are converted to luminance.
GrayImage read_gray_image(const std::filesystem::path& path);
// Gray rasters are replicated into three channels.
ColorImage read_color_image(const std::filesystem::path& path);

Raster to_raster(const ColorImage& img);
Raster to_raster(const GrayImage& img);
ColorImage color_from_raster(const Raster& raster);

bool is_image_file(const std::filesystem::path& path);

}  // namespace texnet
