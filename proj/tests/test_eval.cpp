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

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "oracles.hpp"
#include "texnet/dataset.hpp"
#include "texnet/embedding_io.hpp"
#include "texnet/error.hpp"
#include "texnet/image_io.hpp"
#include "texnet/linear_svm.hpp"
#include "texnet/mapped_image.hpp"
#include "texnet/protocol.hpp"
#include "texnet/synth.hpp"

using namespace texnet;
namespace fs = std::filesystem;

namespace {

// Small synthetic dataset shared by the protocol tests.
const fs::path& shared_dataset() {
  static const fs::path root = [] {
    const auto dir = oracle::scratch_dir("evalset");
    SynthConfig sc;
    sc.classes = 3;
    sc.per_class = 8;
    sc.side = 16;
    write_synthetic_dataset(dir, sc);
    return dir;
  }();
  return root;
}

}  // namespace

TEST_CASE("train_count rounding and clamping") {
  CHECK(train_count(0.5, 10) == 5);
  CHECK(train_count(0.5, 5) == 3);  // 2.5 rounds up
  CHECK(train_count(0.3, 5) == 2);  // 1.5 rounds up
  CHECK(train_count(0.01, 10) == 1);
  CHECK(train_count(0.99, 10) == 9);
  CHECK(train_count(0.5, 2) == 1);
}

TEST_CASE("dataset index") {
  const DatasetIndex idx = index_dataset(shared_dataset());
  CHECK(idx.classes == std::vector<std::string>{"c00_grating", "c01_checker", "c02_noise"});
  CHECK(idx.size() == 24);
  CHECK(idx.counts == std::vector<std::size_t>{8, 8, 8});
  CHECK(std::is_sorted(idx.samples.begin(), idx.samples.end(),
                       [](const Sample& a, const Sample& b) {
                         return std::tie(a.label, a.path) < std::tie(b.label, b.path);
                       }));
  CHECK(idx.samples[0].path == fs::path("c00_grating") / "img_000.png");

  const auto dir = oracle::scratch_dir("badindex");
  CHECK_THROWS_AS(index_dataset(dir / "missing"), IoError);
  fs::create_directories(dir / "only");
  write_text_file(dir / "only" / "a.pgm", "x");
  CHECK_THROWS_AS(index_dataset(dir), DataError);
  fs::create_directories(dir / "empty");
  CHECK_THROWS_AS(index_dataset(dir), DataError);
  fs::remove_all(dir);
}

TEST_CASE("stratified splits") {
  DatasetIndex idx;
  idx.classes = {"a", "b"};
  idx.counts = {5, 7};
  for (int c = 0; c < 2; ++c) {
    for (std::size_t i = 0; i < idx.counts[c]; ++i) idx.samples.push_back({"x", c});
  }
  SplitPlan plan;
  plan.repetitions = 6;
  plan.seed = 9;
  const auto splits = make_splits(idx, plan);
  REQUIRE(splits.size() == 6);
  for (const Split& s : splits) {
    CHECK(s.train.size() + s.test.size() == 12);
    CHECK(std::is_sorted(s.train.begin(), s.train.end()));
    std::set<std::size_t> all(s.train.begin(), s.train.end());
    all.insert(s.test.begin(), s.test.end());
    CHECK(all.size() == 12);
    const auto in_a = std::count_if(s.train.begin(), s.train.end(), [](std::size_t i) { return i < 5; });
    CHECK(in_a == 3);
    CHECK(s.train.size() - in_a == 4);
  }
  CHECK(splits[0].train != splits[1].train);
  CHECK(make_splits(idx, plan)[3].train == splits[3].train);

  SplitPlan shifted = plan;
  shifted.seed = 10;
  shifted.repetitions = 1;
  // Run i uses seed + i, so run 1 of seed 9 is run 0 of seed 10.
  CHECK(make_splits(idx, shifted)[0].train == splits[1].train);

  idx.counts = {1, 7};
  idx.samples.erase(idx.samples.begin() + 1, idx.samples.begin() + 5);
  try {
    make_splits(idx, plan);
    FAIL("expected DataError");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("'a'") != std::string::npos);
  }
  SplitPlan bad;
  bad.train_ratio = 1.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("linear svm on separable clusters") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> noise(0.0, 0.15);
  const std::vector<std::pair<double, double>> centres{{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
  const std::size_t n = 4 * 30;
  Tensor x({n, 2});
  std::vector<int> y;
  for (std::size_t i = 0; i < n; ++i) {
    const int c = static_cast<int>(i % 4);
    x[i * 2] = centres[c].first + noise(rng);
    x[i * 2 + 1] = centres[c].second + noise(rng);
    y.push_back(c);
  }
  const LinearModel m = train_linear_ova(x, y, 4);
  CHECK(m.classes == 4);
  CHECK(m.dims == 2);
  const RunMetrics r = evaluate(m, x, y);
  CHECK(r.total == n);
  CHECK(r.correct == n);
  CHECK(r.accuracy == 1.0);
  CHECK(r.confusion[2][2] == 30);
  // Same seed, same model.
  CHECK(train_linear_ova(x, y, 4).weights == m.weights);

  std::vector<int> one_class(n, 0);
  CHECK_THROWS_AS(train_linear_ova(x, one_class, 2), DataError);
}

TEST_CASE("prediction ties and evaluation counts") {
  LinearModel m;
  m.classes = 3;
  m.dims = 1;
  m.weights = {1.0, 1.0, -1.0};
  m.biases = {0.0, 0.0, 0.0};
  const std::vector<double> pos{2.0}, neg{-2.0};
  CHECK(m.predict(pos) == 0);
  CHECK(m.predict(neg) == 2);
  const Tensor x({3, 1}, std::vector<double>{2.0, -2.0, 1.0});
  const std::vector<int> y{1, 2, 0};
  const RunMetrics r = evaluate(m, x, y);
  CHECK(r.correct == 2);
  CHECK(r.total == 3);
  CHECK(r.accuracy == doctest::Approx(2.0 / 3.0));
  CHECK(r.confusion[1][0] == 1);
}

TEST_CASE("row normalisation") {
  const Tensor x({2, 2}, std::vector<double>{3.0, 4.0, 0.0, 0.0});
  const Tensor n = l2_normalize_rows(x);
  CHECK(n[0] == doctest::Approx(0.6));
  CHECK(n[1] == doctest::Approx(0.8));
  CHECK(n[2] == 0.0);
}

TEST_CASE("mean and sample standard deviation") {
  const std::vector<double> v{1, 2, 3, 4};
  const MeanStd s = summarize(v);
  CHECK(s.mean == 2.5);
  CHECK(s.std == doctest::Approx(std::sqrt(5.0 / 3.0)));
  const std::vector<double> one{0.7};
  CHECK(summarize(one).std == 0.0);
}

TEST_CASE("histogram protocol is deterministic and thread independent") {
  const DatasetIndex idx = index_dataset(shared_dataset());
  ProtocolConfig cfg;
  cfg.plan.repetitions = 4;
  const EvalReport a = run_protocol(idx, cfg);
  cfg.threads = 3;
  const EvalReport b = run_protocol(idx, cfg);
  CHECK(report_csv(a) == report_csv(b));
  REQUIRE(a.runs.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(a.runs[i].run == i);
    CHECK(a.runs[i].split_seed == cfg.plan.seed + i);
    CHECK(a.runs[i].metrics.total == 12);
  }
  std::vector<double> acc;
  for (const auto& r : a.runs) acc.push_back(r.metrics.accuracy);
  CHECK(a.mean == summarize(acc).mean);

  const std::string csv = report_csv(a);
  CHECK(csv.rfind("run,S_p,S_t,accuracy\n", 0) == 0);
  const auto j = nlohmann::json::parse(report_json(a));
  CHECK(j.at("feature_source") == "lbp_histogram");
  CHECK(j.at("accuracies").size() == 4);
  CHECK(j.at("config_hash") == a.config_hash);
  CHECK(a.config_hash == hex64(fnv1a64(a.config.dump())));
}

TEST_CASE("micronet protocol") {
  const DatasetIndex idx = index_dataset(shared_dataset());
  const CodeEmbedding emb = build_code_embedding(8, 3);
  ProtocolConfig cfg;
  cfg.source = FeatureSource::kMicronet;
  cfg.plan.repetitions = 2;
  cfg.net.mode = FusionMode::kLate;
  cfg.net.input_side = 16;
  cfg.net.conv_blocks = {{4, 3, 1, 2}, {8, 3, 1, 2}};
  cfg.net.fc_dims = {16};
  cfg.net.class_count = 3;
  cfg.train.epochs = 3;
  cfg.train.learning_rate = 0.01;
  const EvalReport r = run_protocol(idx, cfg, &emb);
  REQUIRE(r.runs.size() == 2);
  CHECK(r.runs[0].loss_curve.size() == 3);
  CHECK(r.runs[1].train_seed == cfg.train.seed + 1);
  CHECK(report_csv(run_protocol(idx, cfg, &emb)) == report_csv(r));

  CHECK_THROWS_AS(run_protocol(idx, cfg), ConfigError);
  cfg.net.class_count = 4;
  CHECK_THROWS_AS(run_protocol(idx, cfg, &emb), ConfigError);
}

TEST_CASE("training set layout") {
  const DatasetIndex idx = index_dataset(shared_dataset());
  const CodeEmbedding emb = build_code_embedding(8, 3);
  ProtocolConfig cfg;
  cfg.net.input_side = 16;
  cfg.net.mode = FusionMode::kEarly4;
  const TrainingSet d = load_training_set(idx, cfg, &emb);
  CHECK(d.rgb.shape() == std::vector<std::size_t>{24, 3, 16, 16});
  CHECK(d.tex.shape() == std::vector<std::size_t>{24, 1, 16, 16});
  CHECK(d.labels[8] == 1);
  // First texture plane of sample 0 is the collapsed mapped image.
  const MappedImage m = collapse_to_single_channel(
      encode_image(read_color_image(idx.root / idx.samples[0].path), emb, cfg.lbp));
  for (std::size_t i = 0; i < 256; ++i) CHECK(d.tex[i] == m.values[i]);
}

TEST_CASE("svm predictions are scale invariant on separable data") {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> noise(0.0, 0.1);
  const std::size_t n = 60;
  Tensor x({n, 3});
  std::vector<int> y;
  for (std::size_t i = 0; i < n; ++i) {
    const int c = static_cast<int>(i % 3);
    for (std::size_t d = 0; d < 3; ++d) x[i * 3 + d] = (static_cast<int>(d) == c ? 1.0 : 0.0) + noise(rng);
    y.push_back(c);
  }
  Tensor scaled = x;
  for (double& v : scaled.values()) v *= 3.0;
  const LinearModel a = train_linear_ova(x, y, 3);
  const LinearModel b = train_linear_ova(scaled, y, 3);
  for (std::size_t i = 0; i < n; ++i) {
    const std::span<const double> row(x.data() + i * 3, 3), srow(scaled.data() + i * 3, 3);
    CHECK(a.predict(row) == b.predict(srow));
  }
  const RunMetrics r = evaluate(a, x, y);
  std::size_t trace = 0;
  for (std::size_t c = 0; c < 3; ++c) {
    trace += r.confusion[c][c];
    std::size_t row_sum = 0;
    for (std::size_t k = 0; k < 3; ++k) row_sum += r.confusion[c][k];
    CHECK(row_sum == 20);
  }
  CHECK(r.accuracy == static_cast<double>(trace) / static_cast<double>(r.total));
}
