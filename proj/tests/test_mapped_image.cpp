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

#include <doctest.h>

#include <json.hpp>

#include <algorithm>
#include <random>

#include "oracles.hpp"
#include "texnet/embedding_io.hpp"
#include "texnet/error.hpp"
#include "texnet/image_io.hpp"
#include "texnet/mapped_image.hpp"
#include "texnet/synth.hpp"

using namespace texnet;
namespace fs = std::filesystem;

namespace {

const CodeEmbedding& embedding8() {
  static const CodeEmbedding e = build_code_embedding(8, 3);
  return e;
}

}  // namespace

TEST_CASE("constant image maps to the point of code 255") {
  const LbpConfig cfg;
  const MappedImage m = encode_image(GrayImage(12, 12, 0.7), embedding8(), cfg);
  const CodeEmbedding n = normalize_embedding(embedding8());
  CHECK(m.channels == 3);
  for (std::size_t r = 0; r < 12; ++r) {
    for (std::size_t c = 0; c < 12; ++c) {
      for (int d = 0; d < 3; ++d) CHECK(m.at(r, c, d) == n.at(255, d));
    }
  }
}

TEST_CASE("encode_image equals code image plus table lookup") {
  std::mt19937_64 rng(15);
  const LbpConfig cfg;
  const CodeEmbedding n = normalize_embedding(embedding8());
  for (int i = 0; i < 10; ++i) {
    const GrayImage img = oracle::random_image(rng, 16, 16);
    const MappedImage m = encode_image(img, embedding8(), cfg);
    const auto naive = oracle::naive_lbp(img, 8, 1.0, false);
    for (std::size_t k = 0; k < naive.codes.size(); ++k) {
      const std::uint32_t code = naive.valid[k] ? naive.codes[k] : 255u;
      for (int d = 0; d < 3; ++d) REQUIRE(m.values[k * 3 + d] == n.at(code, d));
      REQUIRE(static_cast<bool>(m.valid[k]) == naive.valid[k]);
    }
    CHECK(encode_image(map_pixels(img, [](double v) { return v * v * v; }), embedding8(), cfg) == m);
  }
}

TEST_CASE("colour input goes through luminance") {
  std::mt19937_64 rng(16);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<double> rgb(10 * 10 * 3);
  for (double& v : rgb) v = u(rng);
  const ColorImage img(10, 10, rgb);
  CHECK(encode_image(img, embedding8(), LbpConfig{}) == encode_image(to_gray(img), embedding8(), LbpConfig{}));
}

TEST_CASE("configuration mismatches are rejected") {
  LbpConfig cfg;
  cfg.variant = LbpVariant::kUniform2;
  CHECK_THROWS_AS(CodeMapper(embedding8(), cfg), ConfigError);
  cfg.variant = LbpVariant::kRaw;
  cfg.points = 6;
  CHECK_THROWS_AS(CodeMapper(embedding8(), cfg), ConfigError);
}

TEST_CASE("single-channel collapse") {
  std::mt19937_64 rng(17);
  const MappedImage m = encode_image(oracle::random_image(rng, 14, 14), embedding8(), LbpConfig{});
  const MappedImage s = collapse_to_single_channel(m);
  CHECK(s.channels == 1);
  for (std::size_t i = 0; i < s.values.size(); ++i) {
    CHECK(s.values[i] >= 0.0);
    CHECK(s.values[i] <= 1.0);
    for (std::size_t j = 0; j < i; ++j) {
      const double a = m.values[i * 3], b = m.values[j * 3];
      CHECK((a < b) == (s.values[i] < s.values[j]));
    }
  }
  const MappedImage flat = collapse_to_single_channel(encode_image(GrayImage(6, 6, 0.1), embedding8(), LbpConfig{}));
  CHECK(std::all_of(flat.values.begin(), flat.values.end(), [&](double v) { return v == flat.values[0]; }));
  CHECK_THROWS_AS(collapse_to_single_channel(s), ShapeError);
}

TEST_CASE("8-bit cache quantisation error is at most 1/510") {
  std::mt19937_64 rng(18);
  const MappedImage m = encode_image(oracle::random_image(rng, 9, 9), embedding8(), LbpConfig{});
  const MappedImage q = mapped_from_raster(to_raster(m));
  for (std::size_t i = 0; i < m.values.size(); ++i) CHECK(std::abs(q.values[i] - m.values[i]) <= 1.0 / 510 + 1e-15);
}

TEST_CASE("batch encoding mirrors the tree and is idempotent") {
  const auto root = oracle::scratch_dir("batch_in");
  const auto out = oracle::scratch_dir("batch_out");
  SynthConfig sc;
  sc.classes = 2;
  sc.per_class = 5;
  sc.side = 16;
  write_synthetic_dataset(root, sc);
  const LbpConfig cfg;

  const BatchEncodeResult first = batch_encode(root, embedding8(), cfg, out);
  CHECK(first.found == 10);
  CHECK(first.written == 10);
  CHECK(first.failed == 0);
  for (const auto& cls : class_recipes(2)) {
    for (int i = 0; i < 5; ++i) {
      char name[32];
      std::snprintf(name, sizeof name, "img_%03d.png", i);
      const fs::path p = out / cls.name / name;
      REQUIRE(fs::exists(p));
      const Raster r = read_raster(p);
      CHECK(r.channels == 3);
      const MappedImage want = encode_image(read_gray_image(root / cls.name / name), embedding8(), cfg);
      CHECK(mapped_from_raster(r).values == mapped_from_raster(to_raster(want)).values);
    }
  }
  const auto side = nlohmann::json::parse(read_text_file(out / "encoding.json"));
  CHECK(side.at("P") == 8);
  CHECK(side.at("embedding_checksum") == embedding_checksum(embedding8()));

  const BatchEncodeResult again = batch_encode(root, embedding8(), cfg, out);
  CHECK(again.written == 0);
  CHECK(again.skipped == 10);

  BatchEncodeOptions force;
  force.force = true;
  CHECK(batch_encode(root, embedding8(), cfg, out, force).written == 10);

  // A different embedding invalidates the cache.
  const CodeEmbedding other = build_code_embedding(8, 3);
  CodeEmbedding shifted = other;
  shifted.coords[0] += 0.25;
  CHECK(batch_encode(root, shifted, cfg, out).written == 10);

  // An unreadable file is counted, not fatal.
  write_text_file(root / class_recipes(2)[0].name / "broken.png", "not a png");
  const BatchEncodeResult withbad = batch_encode(root, embedding8(), cfg, out);
  CHECK(withbad.failed == 1);
  CHECK(withbad.found == 11);

  BatchEncodeOptions single;
  single.single_channel = true;
  const auto out1 = oracle::scratch_dir("batch_out1");
  batch_encode(root, embedding8(), cfg, out1, single);
  CHECK(read_raster(out1 / class_recipes(2)[1].name / "img_000.pgm").channels == 1);

  fs::remove_all(root);
  fs::remove_all(out);
  fs::remove_all(out1);
}

TEST_CASE("empty dataset root") {
  const auto root = oracle::scratch_dir("batch_empty");
  CHECK_THROWS_AS(batch_encode(root, embedding8(), LbpConfig{}, root / "out"), DataError);
  CHECK_THROWS_AS(batch_encode(root / "nope", embedding8(), LbpConfig{}, root / "out"), IoError);
  fs::remove_all(root);
}
