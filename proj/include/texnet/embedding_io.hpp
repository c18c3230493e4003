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
#include <string_view>

#include "texnet/emd.hpp"
#include "texnet/mds.hpp"

namespace texnet {

// FNV-1a, 64-bit. Used for embedding checksums and config provenance.
std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t v);

// Dissimilarity matrix + classical MDS for all 2^P codes.
CodeEmbedding build_code_embedding(int points, int dims, unsigned threads = 1,
                                   DissimilarityMatrix* matrix_out = nullptr);

// n rows of n comma-separated values, 9 significant digits.
std::string matrix_csv(const DissimilarityMatrix& m);
// Header `code,x0,...,x{D-1}`, one row per code, 17 significant digits.
std::string embedding_csv(const CodeEmbedding& emb);
// {P, D, stress, ground_distance, penalty, ...}; `csv_checksum` is
// fnv1a64 of embedding_csv(emb).
std::string embedding_sidecar_json(const CodeEmbedding& emb);

struct EmbedOutputs {
  std::filesystem::path matrix_csv;
  std::filesystem::path embedding_csv;
  std::filesystem::path sidecar_json;
};
// Writes <prefix>_matrix.csv, <prefix>_embedding.csv, <prefix>_embedding.json.
EmbedOutputs write_embedding_files(const std::filesystem::path& prefix,
                                   const DissimilarityMatrix& matrix, const CodeEmbedding& emb);

// Reads an embedding CSV and its .json sidecar (same stem). Throws IoError on
// missing or malformed files and ConfigError when the two disagree.
CodeEmbedding read_embedding(const std::filesystem::path& csv_path);

// Checksum identifying an embedding's contents.
std::string embedding_checksum(const CodeEmbedding& emb);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace texnet
