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

enum class TextureKind { kGrating, kCheckerboard, kFilteredNoise };

// Class-level texture parameters. Per-image jitter is drawn on top.
struct ClassRecipe {
  std::string name;
  TextureKind kind = TextureKind::kGrating;
  double orientation_deg = 0.0;
  double period = 6.0;     // grating wavelength or checker cell size, pixels
  int blur_x = 1;          // box-filter half widths for filtered noise
  int blur_y = 1;
};

std::vector<ClassRecipe> class_recipes(std::size_t classes);

struct SynthConfig {
  std::size_t classes = 4;
  std::size_t per_class = 50;
  std::size_t side = 32;
  std::uint64_t seed = 1;

  void validate() const;
};

// Deterministic in (seed, class_id, image_id). Random tint per image, so
// colour alone does not identify the class.
ColorImage synth_image(const ClassRecipe& recipe, std::size_t side, std::uint64_t seed,
                       std::size_t class_id, std::size_t image_id);

struct SynthResult {
  std::size_t written = 0;
  std::filesystem::path manifest;
};

// root/<class name>/img_NNN.png plus root/manifest.json.
SynthResult write_synthetic_dataset(const std::filesystem::path& root, const SynthConfig& cfg);

}  // namespace texnet
