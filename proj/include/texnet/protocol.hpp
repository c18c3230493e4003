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
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "texnet/dataset.hpp"
#include "texnet/lbp.hpp"
#include "texnet/linear_svm.hpp"
#include "texnet/mds.hpp"
#include "texnet/network.hpp"
#include "texnet/train.hpp"

namespace texnet {

enum class FeatureSource {
  kLbpHistogram,  // pooled LBP histogram of the grayscale image
  kMicronet,      // penultimate activations of a network trained on the split
};

std::string_view to_string(FeatureSource s);
FeatureSource parse_feature_source(std::string_view s);

struct ProtocolConfig {
  FeatureSource source = FeatureSource::kLbpHistogram;
  LbpConfig lbp;  // raw variant; drives the texture-coded images
  LbpVariant histogram_variant = LbpVariant::kUniform2;
  FusionNetSpec net;
  TrainConfig train;
  SplitPlan plan;
  SvmConfig svm;
  // Optional on-disk mapped-image cache, filled by batch_encode when stale.
  std::filesystem::path mapped_cache;
  unsigned threads = 1;
};

nlohmann::ordered_json to_json(const ProtocolConfig& cfg);

struct RunRecord {
  std::size_t run = 0;
  std::uint64_t split_seed = 0;
  std::uint64_t train_seed = 0;  // micronet initialisation and shuffling
  std::uint64_t svm_seed = 0;
  RunMetrics metrics;
  std::vector<double> loss_curve;  // micronet only
};

struct EvalReport {
  std::string source;
  std::vector<std::string> classes;
  nlohmann::ordered_json config;
  std::string config_hash;  // fnv1a64 of config.dump()
  std::vector<RunRecord> runs;
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation (n - 1)
};

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;
};
MeanStd summarize(std::span<const double> values);

// Network input tensors for every sample of `index`: rgb N x 3 x S x S and,
// for texture modes, the mapped images (1 channel for early_4ch).
TrainingSet load_training_set(const DatasetIndex& index, const ProtocolConfig& cfg,
                              const CodeEmbedding* embedding);

// L2-normalised pooled LBP histograms, one row per sample.
Tensor histogram_features(const DatasetIndex& index, const LbpConfig& cfg);

// Splits, trains, classifies and aggregates. `embedding` is required for
// micronet sources that use the texture stream. Runs execute on cfg.threads
// workers; the report does not depend on the thread count.
EvalReport run_protocol(const DatasetIndex& index, const ProtocolConfig& cfg,
                        const CodeEmbedding* embedding = nullptr);

std::string report_json(const EvalReport& report);
// Header "run,S_p,S_t,accuracy".
std::string report_csv(const EvalReport& report);

}  // namespace texnet
