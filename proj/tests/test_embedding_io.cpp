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

#include <sstream>

#include "oracles.hpp"
#include "texnet/embedding_io.hpp"
#include "texnet/error.hpp"

using namespace texnet;

TEST_CASE("fnv1a64 reference values") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(hex64(0xabcULL) == "0000000000000abc");
}

TEST_CASE("CSV layouts") {
  DissimilarityMatrix m8;
  const CodeEmbedding emb = build_code_embedding(8, 3, 1, &m8);
  CHECK(emb.points == 8);
  CHECK(emb.count() == 256);

  const std::string mcsv = matrix_csv(m8);
  std::istringstream in(mcsv);
  std::string line;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    CHECK(std::count(line.begin(), line.end(), ',') == 255);
    ++rows;
  }
  CHECK(rows == 256);

  const std::string ecsv = embedding_csv(emb);
  CHECK(ecsv.rfind("code,x0,x1,x2\n", 0) == 0);
  CHECK(std::count(ecsv.begin(), ecsv.end(), '\n') == 257);

  const auto meta = nlohmann::json::parse(embedding_sidecar_json(emb));
  CHECK(meta.at("P") == 8);
  CHECK(meta.at("D") == 3);
  CHECK(meta.at("ground_distance") == "circular");
  CHECK(meta.at("penalty") == 1.0);
  CHECK(meta.at("stress").get<double>() == emb.stress);
}

TEST_CASE("embedding files round-trip and are reproducible") {
  const auto dir = oracle::scratch_dir("embio");
  DissimilarityMatrix m;
  const CodeEmbedding emb = build_code_embedding(6, 3, 1, &m);
  const EmbedOutputs a = write_embedding_files(dir / "a", m, emb);
  const CodeEmbedding back = read_embedding(a.embedding_csv);
  CHECK(back.points == 6);
  CHECK(back.dims == 3);
  CHECK(back.coords == emb.coords);  // %.17g round-trips doubles exactly
  CHECK(back.stress == emb.stress);
  CHECK(embedding_checksum(back) == embedding_checksum(emb));

  DissimilarityMatrix m2;
  const CodeEmbedding emb2 = build_code_embedding(6, 3, 2, &m2);
  const EmbedOutputs b = write_embedding_files(dir / "b", m2, emb2);
  CHECK(read_text_file(a.embedding_csv) == read_text_file(b.embedding_csv));
  CHECK(read_text_file(a.matrix_csv) == read_text_file(b.matrix_csv));
  CHECK(read_text_file(a.sidecar_json) == read_text_file(b.sidecar_json));
  std::filesystem::remove_all(dir);
}

TEST_CASE("stress ordering between D=1 and D=3 sidecars") {
  const auto s1 = nlohmann::json::parse(embedding_sidecar_json(build_code_embedding(8, 1)));
  const auto s3 = nlohmann::json::parse(embedding_sidecar_json(build_code_embedding(8, 3)));
  CHECK(s1.at("stress").get<double>() >= s3.at("stress").get<double>());
}

TEST_CASE("malformed embedding files") {
  const auto dir = oracle::scratch_dir("embbad");
  CHECK_THROWS_AS(read_embedding(dir / "missing.csv"), IoError);
  write_text_file(dir / "e.csv", "code,x0\n0,0.5\n1,oops\n");
  write_text_file(dir / "e.json", R"({"P": 1, "D": 1, "stress": 0})");
  CHECK_THROWS_AS(read_embedding(dir / "e.csv"), IoError);
  write_text_file(dir / "e.csv", "code,x0\n0,0.5\n");
  CHECK_THROWS_AS(read_embedding(dir / "e.csv"), ConfigError);
  std::filesystem::remove_all(dir);
}
