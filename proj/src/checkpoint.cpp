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

#include "texnet/checkpoint.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include <json.hpp>

#include "texnet/error.hpp"

namespace texnet {
namespace {

constexpr char kMagic[8] = {'T', 'E', 'X', 'N', 'E', 'T', 'C', 'K'};

void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint64_t get_u64(const std::string& in, std::size_t at) {
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | static_cast<unsigned char>(in[at + i]);
  return v;
}

}  // namespace

void save_checkpoint(const std::filesystem::path& path, Network& net, std::size_t epoch) {
  nlohmann::ordered_json header;
  header["spec"] = to_json(net.spec());
  header["seed"] = net.seed();
  header["epoch"] = epoch;
  auto blocks = nlohmann::ordered_json::array();
  for (const Parameter* p : net.parameters()) blocks.push_back({{"name", p->name}, {"size", p->size()}});
  header["blocks"] = blocks;
  const std::string text = header.dump();

  std::string out(kMagic, sizeof kMagic);
  put_u64(out, text.size());
  out += text;
  for (const Parameter* p : net.parameters()) {
    for (double v : p->value) put_u64(out, std::bit_cast<std::uint64_t>(v));
  }
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!f) throw IoError("cannot write checkpoint '" + path.string() + "'");
}

LoadedCheckpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open checkpoint '" + path.string() + "'");
  const std::string in((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  if (in.size() < 16 || std::memcmp(in.data(), kMagic, sizeof kMagic) != 0) {
    throw IoError("'" + path.string() + "' is not a checkpoint");
  }
  const std::uint64_t len = get_u64(in, 8);
  if (len > in.size() - 16) throw IoError("checkpoint '" + path.string() + "' is truncated");
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(in.substr(16, len));
  } catch (const nlohmann::json::exception& e) {
    throw IoError("checkpoint '" + path.string() + "': bad header: " + e.what());
  }
  LoadedCheckpoint lc{Network(fusion_spec_from_json(header.at("spec")),
                              header.at("seed").get<std::uint64_t>()),
                      header.at("epoch").get<std::size_t>()};
  const auto& blocks = header.at("blocks");
  std::vector<Parameter*> params = lc.net.parameters();
  if (blocks.size() != params.size()) {
    throw ConfigError("checkpoint '" + path.string() + "': block count does not match its spec");
  }
  std::size_t at = 16 + len;
  for (std::size_t b = 0; b < params.size(); ++b) {
    Parameter& p = *params[b];
    if (blocks[b].at("name").get<std::string>() != p.name ||
        blocks[b].at("size").get<std::size_t>() != p.size()) {
      throw ConfigError("checkpoint '" + path.string() + "': block " + std::to_string(b) +
                        " does not match '" + p.name + "'");
    }
    if (in.size() < at + 8 * p.size()) throw IoError("checkpoint '" + path.string() + "' is truncated");
    for (double& v : p.value) {
      v = std::bit_cast<double>(get_u64(in, at));
      at += 8;
    }
  }
  if (at != in.size()) throw IoError("checkpoint '" + path.string() + "' has trailing bytes");
  return lc;
}

}  // namespace texnet
