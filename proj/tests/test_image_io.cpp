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

#include <random>

#include "oracles.hpp"
#include "texnet/embedding_io.hpp"
#include "texnet/error.hpp"
#include "texnet/image.hpp"
#include "texnet/image_io.hpp"

using namespace texnet;
namespace fs = std::filesystem;

namespace {

Raster random_raster(std::mt19937_64& rng, std::size_t h, std::size_t w, std::size_t ch,
                     std::uint32_t maxval) {
  Raster r;
  r.height = h;
  r.width = w;
  r.channels = ch;
  r.maxval = maxval;
  std::uniform_int_distribution<std::uint32_t> u(0, maxval);
  for (std::size_t i = 0; i < h * w * ch; ++i) r.samples.push_back(static_cast<std::uint16_t>(u(rng)));
  return r;
}

}  // namespace

TEST_CASE("raster round trips through every format") {
  const auto dir = oracle::scratch_dir("imgio");
  std::mt19937_64 rng(1);
  struct Case {
    const char* name;
    std::size_t channels;
    std::uint32_t maxval;
  };
  for (const Case c : {Case{"a.png", 1, 255}, Case{"b.png", 3, 255}, Case{"c.png", 1, 65535},
                       Case{"d.png", 3, 65535}, Case{"e.pgm", 1, 255}, Case{"f.pgm", 1, 65535},
                       Case{"g.ppm", 3, 255}, Case{"h.ppm", 3, 65535}}) {
    Raster r = random_raster(rng, 7, 11, c.channels, c.maxval);
    r.comments = {"hello world"};
    write_raster(dir / c.name, r);
    const Raster back = read_raster(dir / c.name);
    CHECK(back.height == 7);
    CHECK(back.width == 11);
    CHECK(back.channels == c.channels);
    CHECK(back.maxval == c.maxval);
    CHECK(back.samples == r.samples);
    CHECK(back.comments == r.comments);
  }
  fs::remove_all(dir);
}

TEST_CASE("I/O errors name the path") {
  const auto dir = oracle::scratch_dir("imgerr");
  try {
    read_raster(dir / "missing.png");
    FAIL("expected an error");
  } catch (const IoError& e) {
    CHECK(std::string(e.what()).find("missing.png") != std::string::npos);
  }
  write_text_file(dir / "junk.png", "definitely not png");
  CHECK_THROWS_AS(read_raster(dir / "junk.png"), IoError);
  write_text_file(dir / "junk.pgm", "P5\n3 3\n255\nab");
  CHECK_THROWS_AS(read_raster(dir / "junk.pgm"), IoError);
  CHECK_THROWS_AS(read_raster(dir / "x.bmp"), IoError);
  Raster rgb;
  rgb.height = rgb.width = 1;
  rgb.channels = 3;
  rgb.samples = {1, 2, 3};
  CHECK_THROWS_AS(write_raster(dir / "x.pgm", rgb), IoError);
  fs::remove_all(dir);
}

TEST_CASE("gray and colour conversion") {
  ColorImage c(1, 2, {1.0, 0.0, 0.0, 0.2, 0.4, 0.6});
  const GrayImage g = to_gray(c);
  CHECK(g.at(0, 0) == doctest::Approx(0.299));
  CHECK(g.at(0, 1) == doctest::Approx(0.299 * 0.2 + 0.587 * 0.4 + 0.114 * 0.6));
  const ColorImage back = to_color(g);
  CHECK(back.at(0, 1, 2) == g.at(0, 1));
  CHECK_THROWS_AS(GrayImage(1, 1, 1.5).validate(), DataError);
}

TEST_CASE("8-bit images normalise by 255") {
  const auto dir = oracle::scratch_dir("imgnorm");
  Raster r;
  r.height = 1;
  r.width = 3;
  r.samples = {0, 51, 255};
  write_raster(dir / "g.pgm", r);
  const GrayImage g = read_gray_image(dir / "g.pgm");
  CHECK(g.at(0, 1) == 51.0 / 255.0);
  CHECK(g.at(0, 2) == 1.0);
  fs::remove_all(dir);
}

TEST_CASE("resize_planes") {
  // 4x4 single channel, factor 2 block average.
  std::vector<double> px(16);
  for (std::size_t i = 0; i < 16; ++i) px[i] = static_cast<double>(i);
  const auto half = resize_planes(px, 4, 4, 1, 2);
  CHECK(half == std::vector<double>{2.5, 4.5, 10.5, 12.5});
  CHECK(resize_planes(px, 4, 4, 1, 4) == px);
  const auto up = resize_planes(px, 4, 4, 1, 8);
  CHECK(up.size() == 64);
  CHECK(up[0] == 0.0);
  CHECK(up[63] == 15.0);
}
