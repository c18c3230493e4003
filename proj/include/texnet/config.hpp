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

#include <json.hpp>

#include "texnet/protocol.hpp"
#include "texnet/synth.hpp"

namespace texnet {

struct EmbeddingSettings {
  int dims = 3;
  int points = 0;  // optional; must equal lbp.points when set
  // Embedding CSV from `texnet embed`; when empty it is computed on the fly.
  std::filesystem::path path;
};

struct PipelinePaths {
  std::filesystem::path dataset;
  std::filesystem::path mapped_cache;  // optional
  std::filesystem::path output = "texnet_out";
};

// Everything `train` and `eval` need, read from one JSON file.
struct PipelineConfig {
  std::uint64_t seed = 1;
  unsigned threads = 1;
  LbpConfig lbp;
  EmbeddingSettings embedding;
  ProtocolConfig protocol;  // net, train, plan, svm, feature source
  PipelinePaths paths;

  // Cross-field checks. Throws ConfigError naming the offending field.
  void validate() const;
};

// Unknown keys are rejected. Relative paths resolve against `base_dir`.
PipelineConfig parse_pipeline_config(const nlohmann::json& j,
                                     const std::filesystem::path& base_dir = {});
PipelineConfig load_pipeline_config(const std::filesystem::path& path);

nlohmann::ordered_json to_json(const PipelineConfig& cfg);

}  // namespace texnet
