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

#include "texnet/protocol.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <numeric>
#include <optional>
#include <thread>

#include "texnet/embedding_io.hpp"
#include "texnet/error.hpp"
#include "texnet/image_io.hpp"
#include "texnet/mapped_image.hpp"

namespace texnet {

std::string_view to_string(FeatureSource s) {
  return s == FeatureSource::kMicronet ? "micronet" : "lbp_histogram";
}

FeatureSource parse_feature_source(std::string_view s) {
  if (s == "micronet") return FeatureSource::kMicronet;
  if (s == "lbp_histogram") return FeatureSource::kLbpHistogram;
  throw ConfigError("eval.feature_source: unknown source '" + std::string(s) +
                    "' (expected lbp_histogram or micronet)");
}

nlohmann::ordered_json to_json(const ProtocolConfig& cfg) {
  nlohmann::ordered_json j;
  j["feature_source"] = std::string(to_string(cfg.source));
  j["lbp"] = {{"points", cfg.lbp.points},
              {"radius", cfg.lbp.radius},
              {"variant", std::string(to_string(cfg.lbp.variant))},
              {"interpolation", std::string(to_string(cfg.lbp.interpolation))}};
  j["histogram_variant"] = std::string(to_string(cfg.histogram_variant));
  if (cfg.source == FeatureSource::kMicronet) {
    j["net"] = to_json(cfg.net);
    j["train"] = {{"learning_rate", cfg.train.learning_rate},
                  {"weight_decay", cfg.train.weight_decay},
                  {"momentum", cfg.train.momentum},
                  {"epochs", cfg.train.epochs},
                  {"batch_size", cfg.train.batch_size},
                  {"seed", cfg.train.seed}};
  }
  j["plan"] = {{"train_ratio", cfg.plan.train_ratio},
               {"repetitions", cfg.plan.repetitions},
               {"seed", cfg.plan.seed}};
  j["svm"] = {{"lambda", cfg.svm.lambda}, {"epochs", cfg.svm.epochs}, {"seed", cfg.svm.seed}};
  return j;
}

MeanStd summarize(std::span<const double> values) {
  MeanStd r;
  if (values.empty()) return r;
  const double n = static_cast<double>(values.size());
  r.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - r.mean) * (v - r.mean);
    r.std = std::sqrt(ss / (n - 1.0));
  }
  return r;
}

namespace {

// Interleaved h x w x c -> planar c x side x side, written at `dst`.
void to_planar(std::span<const double> interleaved, std::size_t h, std::size_t w, std::size_t c,
               std::size_t side, double* dst) {
  const std::vector<double> r = resize_planes(interleaved, h, w, c, side);
  const std::size_t plane = side * side;
  for (std::size_t i = 0; i < plane; ++i) {
    for (std::size_t ch = 0; ch < c; ++ch) dst[ch * plane + i] = r[i * c + ch];
  }
}

bool uses_texture(FusionMode m) { return m != FusionMode::kRgbOnly; }

std::size_t texture_channels(FusionMode m) { return m == FusionMode::kEarly4 ? 1 : 3; }

}  // namespace

TrainingSet load_training_set(const DatasetIndex& index, const ProtocolConfig& cfg,
                              const CodeEmbedding* embedding) {
  const std::size_t n = index.size(), side = cfg.net.input_side;
  TrainingSet ts;
  ts.rgb = Tensor({n, 3, side, side});
  for (const Sample& s : index.samples) ts.labels.push_back(s.label);

  const bool tex = uses_texture(cfg.net.mode);
  const std::size_t tc = texture_channels(cfg.net.mode);
  std::optional<CodeMapper> mapper;
  bool collapse = false;
  if (tex) {
    if (embedding == nullptr) throw ConfigError("fusion mode '" + std::string(to_string(cfg.net.mode)) +
                                                "' needs a code embedding");
    if (static_cast<std::size_t>(embedding->dims) != tc && !(tc == 1 && embedding->dims == 3)) {
      throw ConfigError("embedding.dims: fusion mode '" + std::string(to_string(cfg.net.mode)) +
                        "' needs a " + std::to_string(tc) + "-dimensional embedding, got " +
                        std::to_string(embedding->dims));
    }
    collapse = tc == 1 && embedding->dims == 3;
    ts.tex = Tensor({n, tc, side, side});
    if (cfg.mapped_cache.empty()) {
      mapper.emplace(*embedding, cfg.lbp);
    } else {
      BatchEncodeOptions opt;
      opt.single_channel = collapse;
      opt.threads = cfg.threads;
      const BatchEncodeResult r = batch_encode(index.root, *embedding, cfg.lbp, cfg.mapped_cache, opt);
      if (r.failed > 0) {
        throw IoError(std::to_string(r.failed) + " image(s) under '" + index.root.string() +
                      "' could not be encoded");
      }
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    const std::filesystem::path path = index.root / index.samples[i].path;
    const ColorImage rgb = read_color_image(path);
    to_planar(rgb.data(), rgb.height(), rgb.width(), 3, side, ts.rgb.data() + i * ts.rgb.stride0());
    if (!tex) continue;
    MappedImage m;
    if (mapper) {
      m = mapper->encode(to_gray(rgb));
      if (collapse) m = collapse_to_single_channel(m);
    } else {
      m = mapped_from_raster(
          read_raster(cfg.mapped_cache / mapped_relative_path(index.samples[i].path, collapse)));
    }
    if (static_cast<std::size_t>(m.channels) != tc) {
      throw ShapeError("mapped image for '" + path.string() + "' has " + std::to_string(m.channels) +
                       " channels, expected " + std::to_string(tc));
    }
    to_planar(m.values, m.height, m.width, tc, side, ts.tex.data() + i * ts.tex.stride0());
  }
  return ts;
}

Tensor histogram_features(const DatasetIndex& index, const LbpConfig& cfg) {
  const CodeBinner binner(cfg);
  Tensor f({index.size(), binner.bin_count()});
  for (std::size_t i = 0; i < index.size(); ++i) {
    const GrayImage img = read_gray_image(index.root / index.samples[i].path);
    const CodeHistogram h = pool_histogram(compute_code_image(img, cfg), cfg);
    std::copy(h.bins.begin(), h.bins.end(), f.data() + i * f.stride0());
  }
  return l2_normalize_rows(f);
}

namespace {

std::vector<int> labels_of(const DatasetIndex& index, std::span<const std::size_t> rows) {
  std::vector<int> out;
  out.reserve(rows.size());
  for (std::size_t r : rows) out.push_back(index.samples[r].label);
  return out;
}

RunRecord run_once(const DatasetIndex& index, const ProtocolConfig& cfg, const Split& split,
                   std::size_t run, const Tensor* hist, const TrainingSet* data) {
  RunRecord rec;
  rec.run = run;
  rec.split_seed = cfg.plan.run_seed(run);
  rec.svm_seed = cfg.svm.seed + run;
  SvmConfig svm = cfg.svm;
  svm.seed = rec.svm_seed;

  Tensor train_f, test_f;
  if (cfg.source == FeatureSource::kLbpHistogram) {
    train_f = gather_rows(*hist, split.train);
    test_f = gather_rows(*hist, split.test);
  } else {
    TrainConfig tc = cfg.train;
    tc.seed = cfg.train.seed + run;
    rec.train_seed = tc.seed;
    TrainingSet sub;
    sub.rgb = gather_rows(data->rgb, split.train);
    if (data->tex.rank() == 4) sub.tex = gather_rows(data->tex, split.train);
    sub.labels = labels_of(index, split.train);
    TrainResult tr = train(cfg.net, sub, tc);
    rec.loss_curve = tr.loss_curve;
    train_f = extract_features(tr.net, select_streams(cfg.net.mode, *data, split.train));
    test_f = extract_features(tr.net, select_streams(cfg.net.mode, *data, split.test));
  }
  const LinearModel model = train_linear_ova(train_f, labels_of(index, split.train),
                                             index.classes.size(), svm);
  rec.metrics = evaluate(model, test_f, labels_of(index, split.test));
  return rec;
}

}  // namespace

EvalReport run_protocol(const DatasetIndex& index, const ProtocolConfig& cfg,
                        const CodeEmbedding* embedding) {
  cfg.plan.validate();
  cfg.svm.validate();
  EvalReport report;
  report.source = std::string(to_string(cfg.source));
  report.classes = index.classes;
  report.config = to_json(cfg);
  report.config_hash = hex64(fnv1a64(report.config.dump()));

  Tensor hist;
  TrainingSet data;
  if (cfg.source == FeatureSource::kLbpHistogram) {
    LbpConfig hc = cfg.lbp;
    hc.variant = cfg.histogram_variant;
    hist = histogram_features(index, hc);
  } else {
    cfg.net.validate();
    cfg.train.validate();
    if (cfg.net.class_count != index.classes.size()) {
      throw ConfigError("net.class_count is " + std::to_string(cfg.net.class_count) +
                        " but the dataset has " + std::to_string(index.classes.size()) + " classes");
    }
    data = load_training_set(index, cfg, embedding);
  }

  const std::vector<Split> splits = make_splits(index, cfg.plan);
  std::vector<RunRecord> records(splits.size());
  std::vector<std::exception_ptr> errors(splits.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t r = next++; r < splits.size(); r = next++) {
      try {
        records[r] = run_once(index, cfg, splits[r], r, &hist, &data);
      } catch (...) {
        errors[r] = std::current_exception();
      }
    }
  };
  const unsigned workers = std::clamp<unsigned>(cfg.threads, 1, static_cast<unsigned>(splits.size()));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  for (std::size_t r = 0; r < errors.size(); ++r) {
    if (!errors[r]) continue;
    try {
      std::rethrow_exception(errors[r]);
    } catch (const Error& e) {
      throw Error(e.kind(), "run " + std::to_string(r) + ": " + e.what());
    }
  }

  report.runs = std::move(records);
  std::vector<double> acc;
  for (const auto& r : report.runs) acc.push_back(r.metrics.accuracy);
  const MeanStd ms = summarize(acc);
  report.mean = ms.mean;
  report.std = ms.std;
  return report;
}

std::string report_json(const EvalReport& report) {
  nlohmann::ordered_json j;
  j["feature_source"] = report.source;
  j["classes"] = report.classes;
  j["config"] = report.config;
  j["config_hash"] = report.config_hash;
  auto runs = nlohmann::ordered_json::array();
  std::vector<double> acc;
  for (const auto& r : report.runs) {
    nlohmann::ordered_json o;
    o["run"] = r.run;
    o["split_seed"] = r.split_seed;
    if (!r.loss_curve.empty()) o["train_seed"] = r.train_seed;
    o["svm_seed"] = r.svm_seed;
    o["S_p"] = r.metrics.correct;
    o["S_t"] = r.metrics.total;
    o["accuracy"] = r.metrics.accuracy;
    o["confusion"] = r.metrics.confusion;
    if (!r.loss_curve.empty()) o["loss_curve"] = r.loss_curve;
    runs.push_back(std::move(o));
    acc.push_back(r.metrics.accuracy);
  }
  j["accuracies"] = acc;
  j["mean"] = report.mean;
  j["std"] = report.std;
  j["runs"] = runs;
  return j.dump(2) + "\n";
}

std::string report_csv(const EvalReport& report) {
  std::string out = "run,S_p,S_t,accuracy\n";
  char buf[96];
  for (const auto& r : report.runs) {
    std::snprintf(buf, sizeof buf, "%zu,%zu,%zu,%.17g\n", r.run, r.metrics.correct, r.metrics.total,
                  r.metrics.accuracy);
    out += buf;
  }
  return out;
}

}  // namespace texnet
