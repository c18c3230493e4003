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

#include "texnet/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>

#include "texnet/error.hpp"

// After a libpng longjmp only `path` is read before throwing.
#pragma GCC diagnostic ignored "-Wclobbered"

namespace texnet {
namespace {

std::string lower_extension(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext;
}

struct FileCloser {
  void operator()(std::FILE* f) const noexcept {
    if (f != nullptr) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const std::filesystem::path& path, const char* mode) {
  FilePtr f(std::fopen(path.c_str(), mode));
  if (!f) throw IoError("cannot open '" + path.string() + "'");
  return f;
}

// ---------------------------------------------------------------- PNM

// Reads the next header token, skipping whitespace and '#' comments.
std::string pnm_token(std::istream& in, std::vector<std::string>& comments) {
  std::string token;
  int ch;
  while ((ch = in.get()) != EOF) {
    if (ch == '#') {
      std::string line;
      std::getline(in, line);
      if (!line.empty() && line.front() == ' ') line.erase(0, 1);
      comments.push_back(line);
      continue;
    }
    if (std::isspace(ch)) {
      if (!token.empty()) break;
      continue;
    }
    token.push_back(static_cast<char>(ch));
  }
  return token;
}

Raster read_pnm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  Raster r;
  const std::string magic = pnm_token(in, r.comments);
  if (magic != "P5" && magic != "P6") {
    throw IoError("'" + path.string() + "': unsupported PNM type '" + magic + "'");
  }
  r.channels = magic == "P5" ? 1 : 3;
  try {
    r.width = std::stoul(pnm_token(in, r.comments));
    r.height = std::stoul(pnm_token(in, r.comments));
    r.maxval = static_cast<std::uint32_t>(std::stoul(pnm_token(in, r.comments)));
  } catch (const std::exception&) {
    throw IoError("'" + path.string() + "': malformed PNM header");
  }
  if (r.width == 0 || r.height == 0 || r.maxval == 0 || r.maxval > 65535) {
    throw IoError("'" + path.string() + "': invalid PNM dimensions or maxval");
  }
  const std::size_t count = r.width * r.height * r.channels;
  const std::size_t bytes_per = r.maxval > 255 ? 2 : 1;
  std::vector<unsigned char> buf(count * bytes_per);
  in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  if (static_cast<std::size_t>(in.gcount()) != buf.size()) {
    throw IoError("'" + path.string() + "': truncated PNM data");
  }
  r.samples.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    r.samples[i] = bytes_per == 1 ? buf[i]
                                  : static_cast<std::uint16_t>((buf[2 * i] << 8) | buf[2 * i + 1]);
    if (r.samples[i] > r.maxval) throw IoError("'" + path.string() + "': sample exceeds maxval");
  }
  return r;
}

void write_pnm(const std::filesystem::path& path, const Raster& r) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << (r.channels == 1 ? "P5" : "P6") << '\n';
  for (const auto& c : r.comments) out << "# " << c << '\n';
  out << r.width << ' ' << r.height << '\n' << r.maxval << '\n';
  if (r.maxval > 255) {
    std::vector<unsigned char> buf(r.samples.size() * 2);
    for (std::size_t i = 0; i < r.samples.size(); ++i) {
      buf[2 * i] = static_cast<unsigned char>(r.samples[i] >> 8);
      buf[2 * i + 1] = static_cast<unsigned char>(r.samples[i] & 0xff);
    }
    out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  } else {
    std::vector<unsigned char> buf(r.samples.begin(), r.samples.end());
    out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  }
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

// ---------------------------------------------------------------- PNG

struct PngReadGuard {
  png_structp png = nullptr;
  png_infop info = nullptr;
  ~PngReadGuard() { png_destroy_read_struct(&png, info ? &info : nullptr, nullptr); }
};

struct PngWriteGuard {
  png_structp png = nullptr;
  png_infop info = nullptr;
  ~PngWriteGuard() { png_destroy_write_struct(&png, info ? &info : nullptr); }
};

void png_error_fn(png_structp png, png_const_charp) { std::longjmp(png_jmpbuf(png), 1); }
void png_warning_fn(png_structp, png_const_charp) {}

Raster read_png(const std::filesystem::path& path) {
  FilePtr file = open_file(path, "rb");
  unsigned char sig[8];
  if (std::fread(sig, 1, 8, file.get()) != 8 || png_sig_cmp(sig, 0, 8) != 0) {
    throw IoError("'" + path.string() + "': not a PNG file");
  }
  PngReadGuard g;
  g.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, png_error_fn, png_warning_fn);
  if (g.png == nullptr) throw IoError("libpng: cannot allocate read struct");
  g.info = png_create_info_struct(g.png);
  if (g.info == nullptr) throw IoError("libpng: cannot allocate info struct");

  Raster r;
  std::vector<png_bytep> rows;
  std::vector<unsigned char> data;
  if (setjmp(png_jmpbuf(g.png))) {
    throw IoError("'" + path.string() + "': corrupt PNG data");
  }
  png_init_io(g.png, file.get());
  png_set_sig_bytes(g.png, 8);
  png_read_info(g.png, g.info);

  const int color_type = png_get_color_type(g.png, g.info);
  int bit_depth = png_get_bit_depth(g.png, g.info);
  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(g.png);
  if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) png_set_expand_gray_1_2_4_to_8(g.png);
  if (png_get_valid(g.png, g.info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(g.png);
  if (color_type & PNG_COLOR_MASK_ALPHA || png_get_valid(g.png, g.info, PNG_INFO_tRNS)) {
    png_set_strip_alpha(g.png);
  }
  if (bit_depth == 16) png_set_swap(g.png);  // host-order little-endian rows
  png_read_update_info(g.png, g.info);

  r.width = png_get_image_width(g.png, g.info);
  r.height = png_get_image_height(g.png, g.info);
  r.channels = png_get_channels(g.png, g.info);
  bit_depth = png_get_bit_depth(g.png, g.info);
  r.maxval = bit_depth == 16 ? 65535 : 255;
  if (r.channels != 1 && r.channels != 3) {
    throw IoError("'" + path.string() + "': unsupported PNG channel layout");
  }

  png_textp text = nullptr;
  int num_text = 0;
  if (png_get_text(g.png, g.info, &text, &num_text) > 0) {
    for (int i = 0; i < num_text; ++i) r.comments.emplace_back(text[i].text);
  }

  const std::size_t rowbytes = png_get_rowbytes(g.png, g.info);
  data.resize(rowbytes * r.height);
  rows.resize(r.height);
  for (std::size_t y = 0; y < r.height; ++y) rows[y] = data.data() + y * rowbytes;
  png_read_image(g.png, rows.data());
  png_read_end(g.png, nullptr);

  const std::size_t count = r.width * r.height * r.channels;
  r.samples.resize(count);
  for (std::size_t y = 0; y < r.height; ++y) {
    const unsigned char* row = rows[y];
    for (std::size_t i = 0; i < r.width * r.channels; ++i) {
      r.samples[y * r.width * r.channels + i] =
          bit_depth == 16 ? static_cast<std::uint16_t>(row[2 * i] | (row[2 * i + 1] << 8))
                          : row[i];
    }
  }
  return r;
}

void write_png(const std::filesystem::path& path, const Raster& r) {
  if (r.maxval != 255 && r.maxval != 65535) {
    throw IoError("PNG output requires maxval 255 or 65535");
  }
  FilePtr file = open_file(path, "wb");
  PngWriteGuard g;
  g.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, png_error_fn, png_warning_fn);
  if (g.png == nullptr) throw IoError("libpng: cannot allocate write struct");
  g.info = png_create_info_struct(g.png);
  if (g.info == nullptr) throw IoError("libpng: cannot allocate info struct");

  const int bit_depth = r.maxval == 255 ? 8 : 16;
  const std::size_t bytes_per = bit_depth / 8;
  const std::size_t rowbytes = r.width * r.channels * bytes_per;
  std::vector<unsigned char> data(rowbytes * r.height);
  for (std::size_t i = 0; i < r.samples.size(); ++i) {
    if (bytes_per == 1) {
      data[i] = static_cast<unsigned char>(r.samples[i]);
    } else {
      data[2 * i] = static_cast<unsigned char>(r.samples[i] >> 8);
      data[2 * i + 1] = static_cast<unsigned char>(r.samples[i] & 0xff);
    }
  }
  std::vector<png_bytep> rows(r.height);
  for (std::size_t y = 0; y < r.height; ++y) rows[y] = data.data() + y * rowbytes;

  std::vector<png_text> texts(r.comments.size());
  static char key[] = "Comment";
  for (std::size_t i = 0; i < r.comments.size(); ++i) {
    texts[i].compression = PNG_TEXT_COMPRESSION_NONE;
    texts[i].key = key;
    texts[i].text = const_cast<char*>(r.comments[i].c_str());
    texts[i].text_length = r.comments[i].size();
  }

  if (setjmp(png_jmpbuf(g.png))) {
    throw IoError("write failed for '" + path.string() + "'");
  }
  png_init_io(g.png, file.get());
  png_set_IHDR(g.png, g.info, static_cast<png_uint_32>(r.width),
               static_cast<png_uint_32>(r.height), bit_depth,
               r.channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  if (!texts.empty()) png_set_text(g.png, g.info, texts.data(), static_cast<int>(texts.size()));
  png_write_info(g.png, g.info);
  png_write_image(g.png, rows.data());
  png_write_end(g.png, nullptr);
}

void check_raster(const Raster& r) {
  if (r.channels != 1 && r.channels != 3) throw ShapeError("raster must have 1 or 3 channels");
  if (r.samples.size() != r.width * r.height * r.channels) {
    throw ShapeError("raster sample count does not match dimensions");
  }
}

std::uint16_t quantize(double v, std::uint32_t maxval) {
  const double clamped = std::clamp(v, 0.0, 1.0);
  return static_cast<std::uint16_t>(std::lround(clamped * maxval));
}

}  // namespace

bool is_image_file(const std::filesystem::path& path) {
  const std::string ext = lower_extension(path);
  return ext == ".png" || ext == ".pgm" || ext == ".ppm";
}

Raster read_raster(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw IoError("no such file: '" + path.string() + "'");
  const std::string ext = lower_extension(path);
  if (ext == ".png") return read_png(path);
  if (ext == ".pgm" || ext == ".ppm" || ext == ".pnm") return read_pnm(path);
  throw IoError("'" + path.string() + "': unsupported image format");
}

void write_raster(const std::filesystem::path& path, const Raster& raster) {
  check_raster(raster);
  const std::string ext = lower_extension(path);
  if (ext == ".png") return write_png(path, raster);
  if (ext == ".pgm" || ext == ".ppm") {
    if ((ext == ".pgm") != (raster.channels == 1)) {
      throw IoError("'" + path.string() + "': extension does not match channel count");
    }
    return write_pnm(path, raster);
  }
  throw IoError("'" + path.string() + "': unsupported output format");
}

ColorImage color_from_raster(const Raster& r) {
  check_raster(r);
  const double scale = 1.0 / static_cast<double>(r.maxval);
  ColorImage img(r.height, r.width);
  for (std::size_t i = 0; i < r.height * r.width; ++i) {
    for (std::size_t ch = 0; ch < 3; ++ch) {
      const std::size_t src = r.channels == 1 ? i : 3 * i + ch;
      img.at(i / r.width, i % r.width, ch) = r.samples[src] * scale;
    }
  }
  return img;
}

GrayImage read_gray_image(const std::filesystem::path& path) {
  const Raster r = read_raster(path);
  if (r.channels == 3) return to_gray(color_from_raster(r));
  const double scale = 1.0 / static_cast<double>(r.maxval);
  std::vector<double> px(r.samples.size());
  for (std::size_t i = 0; i < px.size(); ++i) px[i] = r.samples[i] * scale;
  return GrayImage(r.height, r.width, std::move(px));
}

ColorImage read_color_image(const std::filesystem::path& path) {
  return color_from_raster(read_raster(path));
}

Raster to_raster(const ColorImage& img) {
  Raster r;
  r.height = img.height();
  r.width = img.width();
  r.channels = 3;
  r.samples.reserve(img.data().size());
  for (double v : img.data()) r.samples.push_back(quantize(v, r.maxval));
  return r;
}

Raster to_raster(const GrayImage& img) {
  Raster r;
  r.height = img.height();
  r.width = img.width();
  r.channels = 1;
  r.samples.reserve(img.pixels().size());
  for (double v : img.pixels()) r.samples.push_back(quantize(v, r.maxval));
  return r;
}

}  // namespace texnet
