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

#include "texnet/synth.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include "texnet/embedding_io.hpp"
#include "texnet/error.hpp"
#include "texnet/image_io.hpp"

namespace texnet {

std::vector<ClassRecipe> class_recipes(std::size_t classes) {
  std::vector<ClassRecipe> out;
  for (std::size_t c = 0; c < classes; ++c) {
    ClassRecipe r;
    const std::size_t k = c / 3;
    char name[64];
    switch (c % 3) {
      case 0:
        r.kind = TextureKind::kGrating;
        r.orientation_deg = std::fmod(55.0 * static_cast<double>(k), 180.0);
        r.period = 5.0 + 2.0 * static_cast<double>(k % 3);
        std::snprintf(name, sizeof name, "c%02zu_grating", c);
        break;
      case 1:
        r.kind = TextureKind::kCheckerboard;
        r.orientation_deg = std::fmod(30.0 * static_cast<double>(k), 90.0);
        r.period = 2.0 + static_cast<double>(k % 4);
        std::snprintf(name, sizeof name, "c%02zu_checker", c);
        break;
      default:
        r.kind = TextureKind::kFilteredNoise;
        r.blur_x = 1 + static_cast<int>(k % 3);
        r.blur_y = 1 + static_cast<int>((k + 1) % 3);
        std::snprintf(name, sizeof name, "c%02zu_noise", c);
        break;
    }
    r.name = name;
    out.push_back(r);
  }
  return out;
}

void SynthConfig::validate() const {
  if (classes < 2) throw ConfigError("synth.classes must be at least 2");
  if (per_class == 0) throw ConfigError("synth.per_class must be positive");
  if (side < 8) throw ConfigError("synth.side must be at least 8");
}

namespace {

std::vector<double> box_blur(const std::vector<double>& src, std::size_t side, int rx, int ry) {
  const auto s = static_cast<int>(side);
  std::vector<double> out(src.size());
  for (int y = 0; y < s; ++y) {
    for (int x = 0; x < s; ++x) {
      double acc = 0.0;
      for (int dy = -ry; dy <= ry; ++dy) {
        for (int dx = -rx; dx <= rx; ++dx) {
          const int yy = (y + dy + s) % s, xx = (x + dx + s) % s;
          acc += src[static_cast<std::size_t>(yy * s + xx)];
        }
      }
      out[static_cast<std::size_t>(y * s + x)] = acc / static_cast<double>((2 * rx + 1) * (2 * ry + 1));
    }
  }
  return out;
}

}  // namespace

ColorImage synth_image(const ClassRecipe& recipe, std::size_t side, std::uint64_t seed,
                       std::size_t class_id, std::size_t image_id) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(class_id), static_cast<std::uint32_t>(image_id)};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  constexpr double kPi = std::numbers::pi;

  const double phase = 2.0 * kPi * unit(rng);
  const double theta = (recipe.orientation_deg + 8.0 * (unit(rng) - 0.5)) * kPi / 180.0;
  const double contrast = 0.6 + 0.4 * unit(rng);
  const double tint[3] = {0.4 + 0.6 * unit(rng), 0.4 + 0.6 * unit(rng), 0.4 + 0.6 * unit(rng)};
  const double ct = std::cos(theta), st = std::sin(theta);

  std::vector<double> t(side * side);
  switch (recipe.kind) {
    case TextureKind::kGrating:
      for (std::size_t y = 0; y < side; ++y) {
        for (std::size_t x = 0; x < side; ++x) {
          const double u = ct * static_cast<double>(x) + st * static_cast<double>(y);
          t[y * side + x] = 0.5 + 0.5 * std::sin(2.0 * kPi * u / recipe.period + phase);
        }
      }
      break;
    case TextureKind::kCheckerboard: {
      const double ox = recipe.period * phase / (2.0 * kPi);
      const double oy = recipe.period * unit(rng);
      for (std::size_t y = 0; y < side; ++y) {
        for (std::size_t x = 0; x < side; ++x) {
          const double u = ct * static_cast<double>(x) + st * static_cast<double>(y) + ox;
          const double v = -st * static_cast<double>(x) + ct * static_cast<double>(y) + oy;
          const auto cu = static_cast<long>(std::floor(u / recipe.period));
          const auto cv = static_cast<long>(std::floor(v / recipe.period));
          t[y * side + x] = ((cu + cv) & 1) ? 1.0 : 0.0;
        }
      }
      break;
    }
    case TextureKind::kFilteredNoise: {
      std::vector<double> w(side * side);
      for (double& v : w) v = unit(rng);
      t = box_blur(w, side, recipe.blur_x, recipe.blur_y);
      const auto [lo, hi] = std::minmax_element(t.begin(), t.end());
      const double a = *lo, span = std::max(*hi - *lo, 1e-12);
      for (double& v : t) v = (v - a) / span;
      break;
    }
  }

  ColorImage img(side, side);
  for (std::size_t y = 0; y < side; ++y) {
    for (std::size_t x = 0; x < side; ++x) {
      const double base = 0.5 + contrast * (t[y * side + x] - 0.5);
      for (std::size_t c = 0; c < 3; ++c) {
        img.at(y, x, c) = std::clamp(tint[c] * base + 0.03 * gauss(rng), 0.0, 1.0);
      }
    }
  }
  return img;
}

SynthResult write_synthetic_dataset(const std::filesystem::path& root, const SynthConfig& cfg) {
  cfg.validate();
  const std::vector<ClassRecipe> recipes = class_recipes(cfg.classes);
  SynthResult res;
  nlohmann::ordered_json manifest;
  manifest["generator"] = "texnet synth";
  manifest["seed"] = cfg.seed;
  manifest["classes"] = cfg.classes;
  manifest["per_class"] = cfg.per_class;
  manifest["side"] = cfg.side;
  auto rj = nlohmann::ordered_json::array();
  for (std::size_t c = 0; c < recipes.size(); ++c) {
    const ClassRecipe& r = recipes[c];
    static constexpr const char* kKinds[] = {"grating", "checkerboard", "filtered_noise"};
    rj.push_back({{"name", r.name},
                  {"kind", kKinds[static_cast<int>(r.kind)]},
                  {"orientation_deg", r.orientation_deg},
                  {"period", r.period},
                  {"blur_x", r.blur_x},
                  {"blur_y", r.blur_y}});
    const std::filesystem::path dir = root / r.name;
    std::filesystem::create_directories(dir);
    for (std::size_t i = 0; i < cfg.per_class; ++i) {
      char file[32];
      std::snprintf(file, sizeof file, "img_%03zu.png", i);
      write_raster(dir / file, to_raster(synth_image(r, cfg.side, cfg.seed, c, i)));
      ++res.written;
    }
  }
  manifest["recipes"] = rj;
  manifest["images"] = res.written;
  res.manifest = root / "manifest.json";
  write_text_file(res.manifest, manifest.dump(2) + "\n");
  return res;
}

}  // namespace texnet
