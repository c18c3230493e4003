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

#include "texnet/embedding_io.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "texnet/error.hpp"

namespace texnet {
namespace {

std::string format_number(double v, int digits) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

}  // namespace

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

CodeEmbedding build_code_embedding(int points, int dims, unsigned threads,
                                   DissimilarityMatrix* matrix_out) {
  DissimilarityMatrix m = build_dissimilarity_matrix(points, threads);
  CodeEmbedding emb = classical_mds(m, dims);
  emb.points = points;
  if (matrix_out) *matrix_out = std::move(m);
  return emb;
}

std::string matrix_csv(const DissimilarityMatrix& m) {
  std::string out;
  out.reserve(m.size() * m.size() * 12);
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = 0; j < m.size(); ++j) {
      if (j) out += ',';
      out += format_number(m(i, j), 9);
    }
    out += '\n';
  }
  return out;
}

std::string embedding_csv(const CodeEmbedding& emb) {
  std::string out = "code";
  for (int d = 0; d < emb.dims; ++d) out += ",x" + std::to_string(d);
  out += '\n';
  for (std::size_t i = 0; i < emb.count(); ++i) {
    out += std::to_string(i);
    for (int d = 0; d < emb.dims; ++d) out += ',' + format_number(emb.at(i, d), 17);
    out += '\n';
  }
  return out;
}

std::string embedding_checksum(const CodeEmbedding& emb) {
  return hex64(fnv1a64(embedding_csv(emb)));
}

std::string embedding_sidecar_json(const CodeEmbedding& emb) {
  nlohmann::ordered_json j;
  j["P"] = emb.points;
  j["D"] = emb.dims;
  j["stress"] = emb.stress;
  j["ground_distance"] = "circular";
  j["penalty"] = kUnmatchedMassPenalty;
  j["eigenvalues"] = emb.eigenvalues;
  j["padded"] = emb.padded;
  j["normalized"] = emb.normalized;
  j["csv_checksum"] = embedding_checksum(emb);
  return j.dump(2) + "\n";
}

EmbedOutputs write_embedding_files(const std::filesystem::path& prefix,
                                   const DissimilarityMatrix& matrix, const CodeEmbedding& emb) {
  const std::string base = prefix.string();
  EmbedOutputs out{base + "_matrix.csv", base + "_embedding.csv", base + "_embedding.json"};
  write_text_file(out.matrix_csv, matrix_csv(matrix));
  write_text_file(out.embedding_csv, embedding_csv(emb));
  write_text_file(out.sidecar_json, embedding_sidecar_json(emb));
  return out;
}

CodeEmbedding read_embedding(const std::filesystem::path& csv_path) {
  std::filesystem::path sidecar = csv_path;
  sidecar.replace_extension(".json");
  const std::string csv = read_text_file(csv_path);
  nlohmann::json meta;
  try {
    meta = nlohmann::json::parse(read_text_file(sidecar));
  } catch (const nlohmann::json::exception& e) {
    throw IoError("'" + sidecar.string() + "': " + e.what());
  }

  CodeEmbedding emb;
  try {
    emb.points = meta.at("P").get<int>();
    emb.dims = meta.at("D").get<int>();
    emb.stress = meta.at("stress").get<double>();
    emb.eigenvalues = meta.value("eigenvalues", std::vector<double>{});
    emb.padded = meta.value("padded", false);
    emb.normalized = meta.value("normalized", false);
  } catch (const nlohmann::json::exception& e) {
    throw IoError("'" + sidecar.string() + "': " + e.what());
  }
  if (emb.points < 1 || emb.points > 24 || emb.dims < 1) {
    throw IoError("'" + sidecar.string() + "': invalid P or D");
  }

  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  const std::size_t expected = std::size_t{1} << emb.points;
  emb.coords.reserve(expected * emb.dims);
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string cell;
    std::getline(fields, cell, ',');
    if (cell != std::to_string(row)) {
      throw IoError("'" + csv_path.string() + "': row " + std::to_string(row) + " out of order");
    }
    for (int d = 0; d < emb.dims; ++d) {
      if (!std::getline(fields, cell, ',')) {
        throw IoError("'" + csv_path.string() + "': short row " + std::to_string(row));
      }
      try {
        emb.coords.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw IoError("'" + csv_path.string() + "': bad number '" + cell + "'");
      }
    }
    ++row;
  }
  if (row != expected) {
    throw ConfigError("'" + csv_path.string() + "': " + std::to_string(row) +
                      " codes but sidecar says P=" + std::to_string(emb.points));
  }
  return emb;
}

}  // namespace texnet
