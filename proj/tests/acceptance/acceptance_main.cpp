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

// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>

#include "gradcheck.hpp"
#include "oracles.hpp"
#include "texnet/dataset.hpp"
#include "texnet/embedding_io.hpp"
#include "texnet/emd.hpp"
#include "texnet/error.hpp"
#include "texnet/lbp.hpp"
#include "texnet/mapped_image.hpp"
#include "texnet/mds.hpp"
#include "texnet/protocol.hpp"
#include "texnet/simd/kernels.hpp"
#include "texnet/synth.hpp"

using namespace texnet;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::size_t code_mismatches(const CodeImage& got, const oracle::NaiveCodes& want) {
  std::size_t bad = 0;
  for (std::size_t i = 0; i < want.codes.size(); ++i) {
    const bool valid = got.valid_mask()[i] != 0;
    if (valid != want.valid[i] || (valid && got.codes()[i] != want.codes[i])) ++bad;
  }
  return bad;
}

Outcome lbp_oracle() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(1001);
  std::vector<const simd::KernelTable*> tables{&simd::scalar_kernels()};
  if (simd::avx2_kernels() != nullptr) tables.push_back(simd::avx2_kernels());
  std::size_t mismatches = 0, images = 0;
  for (int i = 0; i < 100; ++i) {
    const GrayImage img = i % 2 == 0 ? oracle::random_image(rng, 32, 32)
                                     : oracle::random_quantized_image(rng, 32, 32, 8);
    ++images;
    for (auto [P, R] : {std::pair{8, 1.0}, {8, 2.0}, {16, 2.0}}) {
      for (bool bilinear : {false, true}) {
        LbpConfig cfg;
        cfg.points = P;
        cfg.radius = R;
        cfg.interpolation = bilinear ? Interpolation::kBilinear : Interpolation::kNearest;
        const auto want = oracle::naive_lbp(img, P, R, bilinear);
        for (const auto* t : tables) {
          simd::set_active(t);
          mismatches += code_mismatches(compute_code_image(img, cfg), want);
        }
      }
    }
  }
  simd::set_active(nullptr);
  const double secs = seconds_since(t0);
  std::ostringstream d;
  d << images << " images x 3 (P,R) x 2 interpolations x " << tables.size()
    << " kernel sets, " << mismatches << " mismatched pixels, " << fmt("%.2f s", secs);
  return {mismatches == 0 && secs < 10.0, d.str()};
}

Outcome monotone_invariance() {
  std::mt19937_64 rng(1002);
  const std::vector<std::function<double(double)>> transforms{
      [](double v) { return v * v; },
      [](double v) { return std::sqrt(v); },
      [](double v) { return 0.1 + 0.7 * v; },
      [](double v) { return std::expm1(3.0 * v) / std::expm1(3.0); },
      [](double v) { return std::log1p(9.0 * v) / std::log(10.0); }};
  std::size_t mismatched = 0;
  for (int i = 0; i < 100; ++i) {
    const GrayImage img = oracle::random_image(rng, 32, 32);
    const LbpConfig cfg;
    const CodeImage base = compute_code_image(img, cfg);
    for (const auto& f : transforms) {
      const CodeImage t = compute_code_image(map_pixels(img, f), cfg);
      for (std::size_t k = 0; k < base.codes().size(); ++k) {
        mismatched += base.codes()[k] != t.codes()[k] || base.valid_mask()[k] != t.valid_mask()[k];
      }
    }
  }
  return {mismatched == 0, "100 images x 5 transforms, " + std::to_string(mismatched) + " mismatched pixels"};
}

Outcome uniform_census() {
  int uniform = 0;
  for (std::uint32_t c = 0; c < 256; ++c) uniform += oracle::transitions(c, 8) <= 2;
  LbpConfig u2, riu2;
  u2.variant = LbpVariant::kUniform2;
  riu2.variant = LbpVariant::kRotationInvariantUniform2;
  const std::size_t u2_bins = CodeBinner(u2).bin_count();
  const std::size_t riu2_bins = CodeBinner(riu2).bin_count();
  std::ostringstream d;
  d << uniform << " uniform codes, uniform2 bins " << u2_bins << ", riu2 bins " << riu2_bins;
  return {uniform == 58 && u2_bins == 59 && riu2_bins == 10, d.str()};
}

Outcome emd_oracle() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(1004);
  std::uniform_int_distribution<std::uint32_t> code(0, 255);
  double worst_pair = 0.0;
  for (int i = 0; i < 500; ++i) {
    const std::uint32_t a = code(rng), b = code(rng);
    worst_pair = std::max(worst_pair, std::abs(code_emd(a, b, 8) - oracle::brute_force_emd(a, b, 8)));
  }
  const DissimilarityMatrix m = build_dissimilarity_matrix(8);
  std::size_t asym = 0, diag = 0;
  for (std::size_t i = 0; i < 256; ++i) {
    diag += m(i, i) != 0.0;
    for (std::size_t j = 0; j < 256; ++j) asym += m(i, j) != m(j, i);
  }
  std::uniform_int_distribution<std::size_t> idx(0, 255);
  double worst_triangle = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const std::size_t a = idx(rng), b = idx(rng), c = idx(rng);
    worst_triangle = std::max(worst_triangle, m(a, c) - m(a, b) - m(b, c));
  }
  const double secs = seconds_since(t0);
  std::ostringstream d;
  d << "max |emd - oracle| " << worst_pair << ", " << asym << " asymmetric, " << diag
    << " nonzero diagonal, worst triangle excess " << worst_triangle << ", " << fmt("%.2f s", secs);
  return {worst_pair <= 1e-9 && asym == 0 && diag == 0 && worst_triangle <= 1e-9 && secs < 60.0, d.str()};
}

Outcome mds_exactness() {
  std::mt19937_64 rng(1005);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<std::size_t> size(3, 32);
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const int D = 1 + i % 3;
    const std::size_t n = size(rng);
    std::vector<double> pts(n * D);
    for (double& v : pts) v = u(rng);
    DissimilarityMatrix m(n);
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) m(a, b) = oracle::euclid(&pts[a * D], &pts[b * D], D);
    }
    worst = std::max(worst, classical_mds(m, D).stress);
  }
  const DissimilarityMatrix m8 = build_dissimilarity_matrix(8);
  std::ostringstream curve;
  bool monotone = true;
  double prev = 2.0;
  for (int D = 1; D <= 8; ++D) {
    const double s = classical_mds(m8, D).stress;
    if (D <= 3) monotone = monotone && s <= prev;
    prev = s;
    curve << (D > 1 ? " " : "") << fmt("%.4f", s);
  }
  std::ostringstream d;
  d << "worst random-set stress " << worst << "; P=8 stress for D=1..8: " << curve.str()
    << " (non-increasing over D=1..3 required)";
  return {worst < 1e-8 && monotone, d.str()};
}

Outcome mapped_composition() {
  std::mt19937_64 rng(1006);
  const CodeEmbedding emb = build_code_embedding(8, 3);
  const CodeEmbedding table = normalize_embedding(emb);
  const LbpConfig cfg;
  std::size_t mismatched = 0;
  for (int i = 0; i < 50; ++i) {
    const GrayImage img = oracle::random_image(rng, 32, 32);
    const MappedImage m = encode_image(img, emb, cfg);
    const CodeImage codes = compute_code_image(img, cfg);
    for (std::size_t k = 0; k < codes.codes().size(); ++k) {
      const std::uint32_t c = codes.valid_mask()[k] ? codes.codes()[k] : border_fill_code(8);
      for (int d = 0; d < 3; ++d) mismatched += m.values[k * 3 + d] != table.at(c, d);
    }
  }
  return {mismatched == 0, "50 images, " + std::to_string(mismatched) + " mismatched values"};
}

Outcome gradient_checks() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(1007);
  gradcheck::Worst worst;
  auto take = [&](const gradcheck::Worst& w, const std::string& what) { worst.update(w.error, what + " " + w.where); };
  {
    Conv2d c("conv", 3, 4, 3, 1);
    c.init(rng);
    take(gradcheck::check_layer(c, gradcheck::random_tensor(rng, {2, 3, 6, 6}), rng), "conv");
  }
  {
    Conv2d c("conv_s2", 2, 3, 5, 2);
    c.init(rng);
    take(gradcheck::check_layer(c, gradcheck::random_tensor(rng, {2, 2, 7, 7}), rng), "conv_s2");
  }
  {
    Relu r;
    take(gradcheck::check_layer(r, gradcheck::random_tensor(rng, {2, 3, 4, 4}), rng), "relu");
  }
  {
    MaxPool2d p(2);
    take(gradcheck::check_layer(p, gradcheck::random_tensor(rng, {2, 3, 6, 6}), rng), "maxpool");
  }
  {
    Dense f("dense", 18, 5);
    f.init(rng);
    take(gradcheck::check_layer(f, gradcheck::random_tensor(rng, {3, 2, 3, 3}), rng), "dense");
  }
  take(gradcheck::check_softmax_ce(rng), "softmax_ce");
  for (FusionMode mode : {FusionMode::kRgbOnly, FusionMode::kTexOnly, FusionMode::kEarly6,
                          FusionMode::kEarly4, FusionMode::kLate}) {
    take(gradcheck::check_network(mode, 0.0, 2000 + static_cast<int>(mode)), std::string(to_string(mode)));
  }
  take(gradcheck::check_network(FusionMode::kLate, 5e-4, 2100), "late+wd");
  const double secs = seconds_since(t0);
  std::ostringstream d;
  d << "max relative error " << worst.error << " (at " << worst.where << "), " << fmt("%.2f s", secs);
  return {worst.error < 1e-4 && secs < 60.0, d.str()};
}

bool rejects(Network& net, const std::vector<Tensor>& xs) {
  try {
    net.forward(xs);
  } catch (const ShapeError&) {
    return true;
  }
  return false;
}

Outcome fusion_shapes() {
  std::mt19937_64 rng(1008);
  auto t = [&](std::size_t c) { return gradcheck::random_tensor(rng, {2, c, 32, 32}, 0, 1); };
  FusionNetSpec spec;
  spec.class_count = 4;
  int failures = 0;
  auto expect = [&](bool ok) { failures += !ok; };

  spec.mode = FusionMode::kEarly6;
  Network e6(spec, 1);
  expect(e6.forward(std::vector<Tensor>{t(6)}).logits.dim(1) == 4);
  expect(e6.forward(std::vector<Tensor>{t(3), t(3)}).logits.dim(1) == 4);
  for (std::size_t c : {3u, 4u, 5u, 7u}) expect(rejects(e6, {t(c)}));

  spec.mode = FusionMode::kEarly4;
  Network e4(spec, 1);
  expect(e4.forward(std::vector<Tensor>{t(4)}).logits.dim(1) == 4);
  expect(e4.forward(std::vector<Tensor>{t(3), t(1)}).logits.dim(1) == 4);
  for (std::size_t c : {3u, 6u}) expect(rejects(e4, {t(c)}));
  expect(rejects(e4, {t(3), t(3)}));

  spec.mode = FusionMode::kLate;
  Network late(spec, 1);
  expect(late.forward(std::vector<Tensor>{t(3), t(3)}).logits.dim(1) == 4);
  expect(rejects(late, {t(6)}));
  expect(rejects(late, {t(3), t(1)}));
  expect(rejects(late, {t(4), t(3)}));
  expect(rejects(late, {t(3), t(3), t(3)}));

  spec.mode = FusionMode::kRgbOnly;
  Network rgb(spec, 1);
  expect(rgb.forward(std::vector<Tensor>{t(3)}).logits.dim(1) == 4);
  expect(rejects(rgb, {t(6)}));
  return {failures == 0, "32x32 inputs, " + std::to_string(failures) + " contract violations"};
}

struct Bench {
  fs::path root;
  DatasetIndex index;
  CodeEmbedding embedding;
};

const Bench& benchmark() {
  static const Bench b = [] {
    Bench out;
    out.root = oracle::scratch_dir("acceptance_bench");
    SynthConfig sc;
    sc.classes = 4;
    sc.per_class = 50;
    sc.side = 32;
    sc.seed = 1;
    write_synthetic_dataset(out.root, sc);
    out.index = index_dataset(out.root);
    out.embedding = build_code_embedding(8, 3);
    return out;
  }();
  return b;
}

ProtocolConfig micronet_config(FusionMode mode, std::size_t epochs) {
  ProtocolConfig c;
  c.source = FeatureSource::kMicronet;
  c.net.mode = mode;
  c.net.class_count = 4;
  c.train.epochs = epochs;
  return c;
}

bool report_consistent(const EvalReport& r) {
  std::vector<double> acc;
  for (const auto& run : r.runs) acc.push_back(run.metrics.accuracy);
  const MeanStd s = summarize(acc);
  double mean = 0.0;
  for (double a : acc) mean += a;
  mean /= static_cast<double>(acc.size());
  double var = 0.0;
  for (double a : acc) var += (a - mean) * (a - mean);
  const double sd = acc.size() > 1 ? std::sqrt(var / static_cast<double>(acc.size() - 1)) : 0.0;
  return std::abs(r.mean - mean) <= 1e-12 && std::abs(r.std - sd) <= 1e-12 && s.mean == r.mean;
}

Outcome protocol_reproducibility() {
  const Bench& b = benchmark();
  ProtocolConfig hist;
  hist.plan.repetitions = 10;
  const std::string h1 = report_json(run_protocol(b.index, hist));
  const std::string h2 = report_json(run_protocol(b.index, hist));
  const EvalReport hr = run_protocol(b.index, hist);

  ProtocolConfig net = micronet_config(FusionMode::kLate, 2);
  const EvalReport n1 = run_protocol(b.index, net, &b.embedding);
  const EvalReport n2 = run_protocol(b.index, net, &b.embedding);

  std::size_t overlaps = 0, off_ratio = 0;
  const auto splits = make_splits(b.index, hist.plan);
  for (const Split& s : splits) {
    std::set<fs::path> train;
    std::vector<std::size_t> per_class(b.index.classes.size(), 0);
    for (std::size_t i : s.train) {
      train.insert(b.index.samples[i].path);
      ++per_class[b.index.samples[i].label];
    }
    for (std::size_t i : s.test) overlaps += train.count(b.index.samples[i].path);
    for (std::size_t c = 0; c < per_class.size(); ++c) {
      const double want = hist.plan.train_ratio * static_cast<double>(b.index.counts[c]);
      off_ratio += std::abs(static_cast<double>(per_class[c]) - want) > 1.0;
    }
  }
  bool seeds_ok = hr.runs.size() == 10;
  for (std::size_t i = 0; i < hr.runs.size(); ++i) seeds_ok = seeds_ok && hr.runs[i].split_seed == hist.plan.run_seed(i);

  const bool ok = h1 == h2 && report_json(n1) == report_json(n2) && report_consistent(hr) &&
                  report_consistent(n1) && splits.size() == 10 && overlaps == 0 && off_ratio == 0 && seeds_ok;
  std::ostringstream d;
  d << "histogram reports " << (h1 == h2 ? "identical" : "DIFFER") << ", micronet reports "
    << (report_json(n1) == report_json(n2) ? "identical" : "DIFFER") << ", 10 splits with "
    << overlaps << " train/test overlaps and " << off_ratio << " off-ratio classes";
  return {ok, d.str()};
}

Outcome fusion_claim() {
  const auto t0 = Clock::now();
  const Bench& b = benchmark();
  ProtocolConfig hist;
  hist.plan.repetitions = 10;
  const EvalReport h = run_protocol(b.index, hist);
  constexpr std::size_t kEpochs = 20;
  const EvalReport rgb = run_protocol(b.index, micronet_config(FusionMode::kRgbOnly, kEpochs));
  const EvalReport late = run_protocol(b.index, micronet_config(FusionMode::kLate, kEpochs), &b.embedding);
  const double secs = seconds_since(t0);
  std::ostringstream d;
  d << "lbp_histogram " << fmt("%.4f", h.mean) << " +/- " << fmt("%.4f", h.std) << "; rgb_only "
    << fmt("%.4f", rgb.mean) << " +/- " << fmt("%.4f", rgb.std) << "; late " << fmt("%.4f", late.mean)
    << " +/- " << fmt("%.4f", late.std) << " (4 classes x 50, 10 runs, " << kEpochs << " epochs, "
    << fmt("%.0f s", secs) << ")";
  return {h.mean >= 0.95 && late.mean >= rgb.mean, d.str()};
}

Outcome golden_embedding() {
  const fs::path dir = TEXNET_GOLDEN_DIR;
  const CodeEmbedding emb = build_code_embedding(8, 3);
  const std::string csv = embedding_csv(emb);
  const std::string want_csv = read_text_file(dir / "p8_d3_embedding.csv");
  const auto want_meta = nlohmann::json::parse(read_text_file(dir / "p8_d3_embedding.json"));
  const double want_stress = want_meta.at("stress").get<double>();
  const bool csv_ok = csv == want_csv;
  const bool stress_ok = emb.stress == want_stress;
  std::ostringstream d;
  d << "embedding CSV " << (csv_ok ? "byte-identical" : "DIFFERS") << " (checksum "
    << embedding_checksum(emb) << "), stress " << fmt("%.17g", emb.stress)
    << (stress_ok ? " matches" : " differs from") << " frozen " << fmt("%.17g", want_stress);
  return {csv_ok && stress_ok, d.str()};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"LBP oracle equivalence", lbp_oracle},
      {"monotonic invariance", monotone_invariance},
      {"uniform census", uniform_census},
      {"EMD oracle", emd_oracle},
      {"MDS exactness", mds_exactness},
      {"mapped-image composition", mapped_composition},
      {"gradient checks", gradient_checks},
      {"fusion shape contracts", fusion_shapes},
      {"protocol reproducibility", protocol_reproducibility},
      {"desk-scale fusion claim", fusion_claim},
      {"golden embedding", golden_embedding},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " " << (i + 1) << " " << criteria[i].first << ": "
              << o.detail << std::endl;
  }
  if (!benchmark().root.empty()) fs::remove_all(benchmark().root);
  return failed == 0 ? 0 : 1;
}
