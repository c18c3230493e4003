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

#include "texnet/mapped_image.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iostream>
#include <string>
#include <thread>

#include "texnet/embedding_io.hpp"
#include "texnet/error.hpp"

namespace texnet {
namespace fs = std::filesystem;

std::uint32_t border_fill_code(int points) { return (1u << points) - 1; }

CodeMapper::CodeMapper(const CodeEmbedding& emb, const LbpConfig& cfg) : cfg_(cfg) {
  cfg.validate();
  if (cfg.variant != LbpVariant::kRaw) {
    throw ConfigError("mapped image: lbp.variant must be 'raw' (the embedding indexes raw codes), got '" +
                      std::string(to_string(cfg.variant)) + "'");
  }
  if (emb.points != cfg.points) {
    throw ConfigError("mapped image: embedding built for P=" + std::to_string(emb.points) +
                      " but lbp.points=" + std::to_string(cfg.points));
  }
  if (emb.count() != cfg.code_count()) {
    throw ConfigError("mapped image: embedding has " + std::to_string(emb.count()) +
                      " points, expected " + std::to_string(cfg.code_count()));
  }
  table_ = normalize_embedding(emb);
}

MappedImage CodeMapper::encode(const GrayImage& img) const {
  const CodeImage codes = compute_code_image(img, cfg_);
  MappedImage m;
  m.height = img.height();
  m.width = img.width();
  m.channels = table_.dims;
  m.values.resize(m.height * m.width * m.channels);
  m.valid.assign(codes.valid_mask().begin(), codes.valid_mask().end());
  const std::uint32_t fill = border_fill_code(cfg_.points);
  auto raw = codes.codes();
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const auto p = table_.point(m.valid[i] ? raw[i] : fill);
    std::copy(p.begin(), p.end(), m.values.begin() + i * m.channels);
  }
  return m;
}

MappedImage encode_image(const GrayImage& img, const CodeEmbedding& emb, const LbpConfig& cfg) {
  return CodeMapper(emb, cfg).encode(img);
}

MappedImage encode_image(const ColorImage& img, const CodeEmbedding& emb, const LbpConfig& cfg) {
  return CodeMapper(emb, cfg).encode(img);
}

MappedImage collapse_to_single_channel(const MappedImage& m) {
  if (m.channels != 3) {
    throw ShapeError("collapse_to_single_channel: expected 3 channels, got " +
                     std::to_string(m.channels));
  }
  MappedImage out;
  out.height = m.height;
  out.width = m.width;
  out.channels = 1;
  out.valid = m.valid;
  out.values.resize(m.height * m.width);
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    out.values[i] = std::clamp(m.values[i * 3], 0.0, 1.0);
  }
  return out;
}

Raster to_raster(const MappedImage& m) {
  if (m.channels != 1 && m.channels != 3) {
    throw ShapeError("mapped image raster needs 1 or 3 channels, got " + std::to_string(m.channels));
  }
  Raster r;
  r.height = m.height;
  r.width = m.width;
  r.channels = static_cast<std::size_t>(m.channels);
  r.samples.reserve(m.values.size());
  for (double v : m.values) {
    r.samples.push_back(static_cast<std::uint16_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0)));
  }
  return r;
}

MappedImage mapped_from_raster(const Raster& r) {
  MappedImage m;
  m.height = r.height;
  m.width = r.width;
  m.channels = static_cast<int>(r.channels);
  m.values.resize(r.samples.size());
  const double scale = 1.0 / static_cast<double>(r.maxval);
  for (std::size_t i = 0; i < r.samples.size(); ++i) m.values[i] = r.samples[i] * scale;
  m.valid.assign(r.height * r.width, 1);
  return m;
}

fs::path mapped_relative_path(const fs::path& relative, bool single_channel) {
  fs::path out = relative;
  out.replace_extension(single_channel ? ".pgm" : ".png");
  return out;
}

namespace {

std::string encoding_sidecar(const CodeEmbedding& emb, const LbpConfig& cfg, bool single) {
  nlohmann::ordered_json j;
  j["P"] = cfg.points;
  j["R"] = cfg.radius;
  j["D"] = emb.dims;
  j["channels"] = single ? 1 : emb.dims;
  j["variant"] = std::string(to_string(cfg.variant));
  j["interpolation"] = std::string(to_string(cfg.interpolation));
  j["embedding_checksum"] = embedding_checksum(emb);
  j["quantization"] = "round(v*255)";
  return j.dump(2) + "\n";
}

std::vector<fs::path> list_images(const fs::path& root) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (entry.is_regular_file() && is_image_file(entry.path())) {
      files.push_back(fs::relative(entry.path(), root));
    }
  }
  std::sort(files.begin(), files.end());
  return files;
}

}  // namespace

BatchEncodeResult batch_encode(const fs::path& dataset_root, const CodeEmbedding& emb,
                               const LbpConfig& cfg, const fs::path& output_root,
                               const BatchEncodeOptions& options) {
  if (!fs::is_directory(dataset_root)) {
    throw IoError("dataset root '" + dataset_root.string() + "' is not a directory");
  }
  const CodeMapper mapper(emb, cfg);
  if (options.single_channel && mapper.table().dims != 3) {
    throw ConfigError("single-channel output requires a 3-dimensional embedding");
  }
  const std::vector<fs::path> files = list_images(dataset_root);
  if (files.empty()) {
    throw DataError("dataset root '" + dataset_root.string() + "' contains no images");
  }

  fs::create_directories(output_root);
  const fs::path sidecar = output_root / "encoding.json";
  const std::string expected = encoding_sidecar(emb, cfg, options.single_channel);
  bool force = options.force;
  if (fs::exists(sidecar) && read_text_file(sidecar) != expected) {
    std::cerr << "note: " << sidecar.string() << " describes a different encoding; re-encoding\n";
    force = true;
  }

  BatchEncodeResult result;
  result.found = files.size();
  std::atomic<std::size_t> written{0}, skipped{0}, failed{0};
  auto work = [&](std::size_t begin, std::size_t stride) {
    for (std::size_t i = begin; i < files.size(); i += stride) {
      const fs::path out = output_root / mapped_relative_path(files[i], options.single_channel);
      if (!force && fs::exists(out)) {
        ++skipped;
        continue;
      }
      try {
        MappedImage m = mapper.encode(read_gray_image(dataset_root / files[i]));
        if (options.single_channel) m = collapse_to_single_channel(m);
        fs::create_directories(out.parent_path());
        write_raster(out, to_raster(m));
        ++written;
      } catch (const Error& e) {
        std::cerr << "warning: skipping '" << (dataset_root / files[i]).string() << "': " << e.what()
                  << "\n";
        ++failed;
      }
    }
  };
  const unsigned workers = std::max(1u, options.threads);
  if (workers == 1) {
    work(0, 1);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w, workers);
  }
  write_text_file(sidecar, expected);
  result.written = written;
  result.skipped = skipped;
  result.failed = failed;
  return result;
}

}  // namespace texnet
