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

#include "texnet/config.hpp"

#include <initializer_list>
#include <string_view>

#include "texnet/embedding_io.hpp"
#include "texnet/error.hpp"

namespace texnet {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void reject_unknown(const json& obj, std::string_view section,
                    std::initializer_list<std::string_view> allowed) {
  if (!obj.is_object()) throw ConfigError(std::string(section) + ": expected an object");
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (std::string_view a : allowed) ok = ok || key == a;
    if (!ok) {
      throw ConfigError((section.empty() ? std::string() : std::string(section) + ".") + key +
                        ": unknown setting");
    }
  }
}

template <typename T>
void read(const json& obj, std::string_view section, const char* key, T& out) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError((section.empty() ? std::string() : std::string(section) + ".") + key +
                      ": wrong type (" + std::string(obj.at(key).type_name()) + ")");
  }
}

fs::path resolve(const fs::path& p, const fs::path& base) {
  if (p.empty() || p.is_absolute() || base.empty()) return p;
  return base / p;
}

}  // namespace

void PipelineConfig::validate() const {
  lbp.validate();
  if (embedding.points != 0 && embedding.points != lbp.points) {
    throw ConfigError("embedding.points (" + std::to_string(embedding.points) +
                      ") must equal lbp.points (" + std::to_string(lbp.points) + ")");
  }
  if (embedding.dims < 1 || static_cast<std::uint32_t>(embedding.dims) >= lbp.code_count()) {
    throw ConfigError("embedding.dims must lie in [1, 2^P)");
  }
  protocol.plan.validate();
  protocol.svm.validate();
  if (protocol.source == FeatureSource::kMicronet) {
    protocol.net.validate();
    protocol.train.validate();
    const FusionMode m = protocol.net.mode;
    if (m != FusionMode::kRgbOnly) {
      if (lbp.variant != LbpVariant::kRaw) {
        throw ConfigError("lbp.variant must be 'raw' for texture-coded inputs (fusion mode '" +
                          std::string(to_string(m)) + "')");
      }
      const bool ok = embedding.dims == 3 || (m == FusionMode::kEarly4 && embedding.dims == 1);
      if (!ok) {
        throw ConfigError("embedding.dims is " + std::to_string(embedding.dims) + " but fusion mode '" +
                          std::string(to_string(m)) + "' needs 3" +
                          (m == FusionMode::kEarly4 ? " or 1" : ""));
      }
    }
  }
}

PipelineConfig parse_pipeline_config(const json& j, const fs::path& base_dir) {
  reject_unknown(j, "", {"seed", "threads", "lbp", "embedding", "net", "train", "eval", "paths"});
  PipelineConfig c;
  read(j, "", "seed", c.seed);
  read(j, "", "threads", c.threads);
  c.protocol.train.seed = c.seed;
  c.protocol.plan.seed = c.seed;
  c.protocol.svm.seed = c.seed;

  if (j.contains("lbp")) {
    const json& l = j.at("lbp");
    reject_unknown(l, "lbp", {"points", "radius", "variant", "interpolation"});
    read(l, "lbp", "points", c.lbp.points);
    read(l, "lbp", "radius", c.lbp.radius);
    std::string s;
    if (l.contains("variant")) {
      read(l, "lbp", "variant", s);
      c.lbp.variant = parse_variant(s);
    }
    if (l.contains("interpolation")) {
      read(l, "lbp", "interpolation", s);
      c.lbp.interpolation = parse_interpolation(s);
    }
  }
  if (j.contains("embedding")) {
    const json& e = j.at("embedding");
    reject_unknown(e, "embedding", {"dims", "points", "path", "ground_distance"});
    read(e, "embedding", "dims", c.embedding.dims);
    read(e, "embedding", "points", c.embedding.points);
    std::string p;
    read(e, "embedding", "path", p);
    c.embedding.path = resolve(p, base_dir);
    std::string gd = "circular";
    read(e, "embedding", "ground_distance", gd);
    if (gd != "circular") {
      throw ConfigError("embedding.ground_distance: only 'circular' is supported, got '" + gd + "'");
    }
  }
  if (j.contains("net")) {
    const json& n = j.at("net");
    reject_unknown(n, "net", {"fusion_mode", "input_side", "input_channels", "conv_blocks", "fc_dims",
                              "class_count"});
    c.protocol.net = fusion_spec_from_json(n);
  }
  if (j.contains("train")) {
    const json& t = j.at("train");
    reject_unknown(t, "train", {"learning_rate", "weight_decay", "momentum", "epochs", "batch_size", "seed"});
    auto& tc = c.protocol.train;
    read(t, "train", "learning_rate", tc.learning_rate);
    read(t, "train", "weight_decay", tc.weight_decay);
    read(t, "train", "momentum", tc.momentum);
    read(t, "train", "epochs", tc.epochs);
    read(t, "train", "batch_size", tc.batch_size);
    read(t, "train", "seed", tc.seed);
  }
  if (j.contains("eval")) {
    const json& e = j.at("eval");
    reject_unknown(e, "eval", {"feature_source", "histogram_variant", "train_ratio", "repetitions",
                               "seed", "svm_lambda", "svm_epochs"});
    std::string s;
    if (e.contains("feature_source")) {
      read(e, "eval", "feature_source", s);
      c.protocol.source = parse_feature_source(s);
    }
    if (e.contains("histogram_variant")) {
      read(e, "eval", "histogram_variant", s);
      c.protocol.histogram_variant = parse_variant(s);
    }
    read(e, "eval", "train_ratio", c.protocol.plan.train_ratio);
    read(e, "eval", "repetitions", c.protocol.plan.repetitions);
    read(e, "eval", "seed", c.protocol.plan.seed);
    read(e, "eval", "svm_lambda", c.protocol.svm.lambda);
    read(e, "eval", "svm_epochs", c.protocol.svm.epochs);
  }
  if (j.contains("paths")) {
    const json& p = j.at("paths");
    reject_unknown(p, "paths", {"dataset", "mapped_cache", "output"});
    std::string s;
    if (p.contains("dataset")) {
      read(p, "paths", "dataset", s);
      c.paths.dataset = resolve(s, base_dir);
    }
    if (p.contains("mapped_cache")) {
      read(p, "paths", "mapped_cache", s);
      c.paths.mapped_cache = resolve(s, base_dir);
    }
    if (p.contains("output")) {
      read(p, "paths", "output", s);
      c.paths.output = resolve(s, base_dir);
    }
  }
  c.protocol.lbp = c.lbp;
  c.protocol.mapped_cache = c.paths.mapped_cache;
  c.protocol.threads = c.threads;
  c.validate();
  return c;
}

PipelineConfig load_pipeline_config(const fs::path& path) {
  const std::string text = read_text_file(path);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("config '" + path.string() + "' is not valid JSON: " + e.what());
  }
  return parse_pipeline_config(j, path.parent_path());
}

nlohmann::ordered_json to_json(const PipelineConfig& cfg) {
  nlohmann::ordered_json j;
  j["seed"] = cfg.seed;
  j["threads"] = cfg.threads;
  j["lbp"] = {{"points", cfg.lbp.points},
              {"radius", cfg.lbp.radius},
              {"variant", std::string(to_string(cfg.lbp.variant))},
              {"interpolation", std::string(to_string(cfg.lbp.interpolation))}};
  j["embedding"] = {{"dims", cfg.embedding.dims}, {"path", cfg.embedding.path.string()},
                    {"ground_distance", "circular"}};
  j["net"] = to_json(cfg.protocol.net);
  const auto& t = cfg.protocol.train;
  j["train"] = {{"learning_rate", t.learning_rate}, {"weight_decay", t.weight_decay},
                {"momentum", t.momentum},           {"epochs", t.epochs},
                {"batch_size", t.batch_size},       {"seed", t.seed}};
  j["eval"] = {{"feature_source", std::string(to_string(cfg.protocol.source))},
               {"histogram_variant", std::string(to_string(cfg.protocol.histogram_variant))},
               {"train_ratio", cfg.protocol.plan.train_ratio},
               {"repetitions", cfg.protocol.plan.repetitions},
               {"seed", cfg.protocol.plan.seed},
               {"svm_lambda", cfg.protocol.svm.lambda},
               {"svm_epochs", cfg.protocol.svm.epochs}};
  j["paths"] = {{"dataset", cfg.paths.dataset.string()},
                {"mapped_cache", cfg.paths.mapped_cache.string()},
                {"output", cfg.paths.output.string()}};
  return j;
}

}  // namespace texnet
