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

#include "cli_app.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <optional>
#include <sstream>

#include "texnet/checkpoint.hpp"
#include "texnet/config.hpp"
#include "texnet/embedding_io.hpp"
#include "texnet/error.hpp"
#include "texnet/image_io.hpp"
#include "texnet/lbp.hpp"
#include "texnet/mapped_image.hpp"
#include "texnet/protocol.hpp"
#include "texnet/synth.hpp"
#include "texnet/train.hpp"

namespace texnet::cli {
namespace fs = std::filesystem;

namespace {

struct Globals {
  std::optional<std::uint64_t> seed;
  unsigned threads = 1;
  bool force = false;
};

struct LbpFlags {
  int points = 8;
  double radius = 1.0;
  std::string interpolation = "nearest";

  void add(CLI::App* cmd) {
    cmd->add_option("-P,--points", points, "Sampling points on the circle")->capture_default_str();
    cmd->add_option("-R,--radius", radius, "Circle radius in pixels")->capture_default_str();
    cmd->add_option("--interpolation", interpolation, "nearest or bilinear")->capture_default_str();
  }

  LbpConfig config() const {
    LbpConfig c;
    c.points = points;
    c.radius = radius;
    c.interpolation = parse_interpolation(interpolation);
    c.validate();
    return c;
  }
};

int cmd_lbp(const fs::path& input, const fs::path& output, const LbpFlags& flags, std::ostream& out) {
  const LbpConfig cfg = flags.config();
  if (cfg.points > 16) throw ConfigError("lbp.points: PGM output holds at most 16-bit codes");
  const CodeImage codes = compute_code_image(read_gray_image(input), cfg);
  Raster r;
  r.height = codes.height();
  r.width = codes.width();
  r.channels = 1;
  r.maxval = cfg.points <= 8 ? 255 : 65535;
  const std::uint32_t fill = border_fill_code(cfg.points);
  r.samples.reserve(codes.codes().size());
  for (std::size_t i = 0; i < codes.codes().size(); ++i) {
    r.samples.push_back(static_cast<std::uint16_t>(codes.valid_mask()[i] ? codes.codes()[i] : fill));
  }
  std::ostringstream c;
  c << "texnet lbp P=" << cfg.points << " R=" << cfg.radius
    << " interpolation=" << to_string(cfg.interpolation) << " border_fill=" << fill;
  r.comments.push_back(c.str());
  if (output.has_parent_path()) fs::create_directories(output.parent_path());
  write_raster(output, r);
  out << "wrote " << output.string() << " (" << r.width << "x" << r.height << ", "
      << codes.valid_count() << " valid pixels)\n";
  return 0;
}

int cmd_embed(int points, int dims, const fs::path& prefix, const Globals& g, std::ostream& out) {
  if (points < 1 || points > 16) throw ConfigError("embed.points must lie in [1, 16]");
  DissimilarityMatrix m;
  const CodeEmbedding emb = build_code_embedding(points, dims, g.threads, &m);
  const EmbedOutputs files = write_embedding_files(prefix, m, emb);
  out << "wrote " << files.matrix_csv.string() << ", " << files.embedding_csv.string() << ", "
      << files.sidecar_json.string() << " (stress " << emb.stress << ")\n";
  return 0;
}

int cmd_encode(const fs::path& dataset, const fs::path& embedding, const fs::path& output,
               const LbpFlags& flags, bool single, const Globals& g, std::ostream& out) {
  const LbpConfig cfg = flags.config();
  const CodeEmbedding emb = read_embedding(embedding);
  BatchEncodeOptions opt;
  opt.force = g.force;
  opt.single_channel = single;
  opt.threads = g.threads;
  const BatchEncodeResult r = batch_encode(dataset, emb, cfg, output, opt);
  out << "encoded " << r.written << " of " << r.found << " images (" << r.skipped
      << " cached, " << r.failed << " failed) into " << output.string() << "\n";
  return r.failed == 0 ? 0 : 3;
}

int cmd_synth(const fs::path& output, SynthConfig cfg, const Globals& g, std::ostream& out) {
  if (g.seed) cfg.seed = *g.seed;
  if (fs::exists(output / "manifest.json") && !g.force) {
    throw IoError("'" + output.string() + "' already holds a synthetic dataset (use --force)");
  }
  const SynthResult r = write_synthetic_dataset(output, cfg);
  out << "wrote " << r.written << " images and " << r.manifest.string() << "\n";
  return 0;
}

PipelineConfig load_config(const fs::path& path, const Globals& g, const std::string& dataset,
                           const std::string& output) {
  PipelineConfig c = load_pipeline_config(path);
  if (g.seed) {
    c.seed = *g.seed;
    c.protocol.train.seed = c.protocol.plan.seed = c.protocol.svm.seed = *g.seed;
  }
  if (g.threads > 1) c.threads = c.protocol.threads = g.threads;
  if (!dataset.empty()) c.paths.dataset = dataset;
  if (!output.empty()) c.paths.output = output;
  c.validate();
  if (c.paths.dataset.empty()) throw ConfigError("paths.dataset is required");
  return c;
}

std::optional<CodeEmbedding> embedding_for(const PipelineConfig& c) {
  const bool needs = c.protocol.source == FeatureSource::kMicronet &&
                     c.protocol.net.mode != FusionMode::kRgbOnly;
  if (!needs) return std::nullopt;
  CodeEmbedding emb = c.embedding.path.empty()
                          ? build_code_embedding(c.lbp.points, c.embedding.dims, c.threads)
                          : read_embedding(c.embedding.path);
  if (emb.points != c.lbp.points || emb.dims != c.embedding.dims) {
    throw ConfigError("embedding.path holds a P=" + std::to_string(emb.points) + ", D=" +
                      std::to_string(emb.dims) + " embedding; config asks for P=" +
                      std::to_string(c.lbp.points) + ", D=" + std::to_string(c.embedding.dims));
  }
  return emb;
}

std::string provenance(const PipelineConfig& c) {
  nlohmann::ordered_json j;
  j["config"] = to_json(c);
  j["config_hash"] = hex64(fnv1a64(to_json(c).dump()));
  j["seed"] = c.seed;
  return j.dump(2) + "\n";
}

int cmd_train(const fs::path& config, const Globals& g, const std::string& dataset,
              const std::string& output, std::ostream& out) {
  PipelineConfig c = load_config(config, g, dataset, output);
  const DatasetIndex index = index_dataset(c.paths.dataset);
  if (c.protocol.net.class_count != index.classes.size()) {
    throw ConfigError("net.class_count is " + std::to_string(c.protocol.net.class_count) +
                      " but the dataset has " + std::to_string(index.classes.size()) + " classes");
  }
  ProtocolConfig pc = c.protocol;
  pc.source = FeatureSource::kMicronet;
  c.protocol.source = FeatureSource::kMicronet;
  const auto emb = embedding_for(c);
  const TrainingSet data = load_training_set(index, pc, emb ? &*emb : nullptr);
  TrainResult r = train(pc.net, data, pc.train);
  fs::create_directories(c.paths.output);
  save_checkpoint(c.paths.output / "model.ckpt", r.net, pc.train.epochs);
  write_loss_curve(c.paths.output / "loss_curve.csv", r.loss_curve);
  write_text_file(c.paths.output / "train_provenance.json", provenance(c));
  out << "trained " << to_string(pc.net.mode) << " for " << pc.train.epochs << " epochs, final loss "
      << r.loss_curve.back() << "; checkpoint in " << c.paths.output.string() << "\n";
  return 0;
}

int cmd_eval(const fs::path& config, const Globals& g, const std::string& dataset,
             const std::string& output, std::ostream& out) {
  const PipelineConfig c = load_config(config, g, dataset, output);
  const DatasetIndex index = index_dataset(c.paths.dataset);
  const auto emb = embedding_for(c);
  const EvalReport report = run_protocol(index, c.protocol, emb ? &*emb : nullptr);
  fs::create_directories(c.paths.output);
  write_text_file(c.paths.output / "report.json", report_json(report));
  write_text_file(c.paths.output / "report.csv", report_csv(report));
  out << report.source << ": accuracy " << report.mean << " +/- " << report.std << " over "
      << report.runs.size() << " runs; report in " << c.paths.output.string() << "\n";
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Texture-coded image pipeline: LBP codes, code embeddings, mapped images, "
               "fusion networks and evaluation",
               "texnet"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  std::uint64_t seed = 0;
  auto* seed_opt = app.add_option("--seed", seed, "Override every seed");
  app.add_option("--threads", g.threads, "Worker threads")->check(CLI::Range(1u, 256u));
  app.add_flag("--force", g.force, "Recompute outputs that already exist");

  std::string input, output, dataset, embedding, config;
  LbpFlags lbp_flags;
  bool single = false;
  int points = 8, dims = 3;
  SynthConfig synth;

  auto* lbp = app.add_subcommand("lbp", "Write the LBP code image of one image as PGM");
  lbp->add_option("input", input, "Input image (.png, .pgm, .ppm)")->required();
  lbp->add_option("output", output, "Output .pgm")->required();
  lbp_flags.add(lbp);

  auto* embed = app.add_subcommand("embed", "Build the code dissimilarity matrix and its MDS embedding");
  embed->add_option("-P,--points", points, "LBP points")->capture_default_str();
  embed->add_option("-D,--dims", dims, "Embedding dimensions")->capture_default_str();
  embed->add_option("-o,--output", output, "Output prefix")->required();

  auto* encode = app.add_subcommand("encode", "Encode a dataset into mapped images");
  encode->add_option("--dataset", dataset, "Folder-per-class dataset root")->required();
  encode->add_option("--embedding", embedding, "Embedding CSV from `embed`")->required();
  encode->add_option("-o,--output", output, "Mapped-image cache root")->required();
  encode->add_flag("--single-channel", single, "Keep only the first embedding dimension");
  lbp_flags.add(encode);

  auto* syn = app.add_subcommand("synth", "Generate a synthetic texture dataset");
  syn->add_option("-o,--output", output, "Dataset root")->required();
  syn->add_option("--classes", synth.classes, "Number of classes")->capture_default_str();
  syn->add_option("--per-class", synth.per_class, "Images per class")->capture_default_str();
  syn->add_option("--side", synth.side, "Image side in pixels")->capture_default_str();

  auto* tr = app.add_subcommand("train", "Train a fusion network on a whole dataset");
  auto* ev = app.add_subcommand("eval", "Run the repeated-split evaluation protocol");
  for (auto* cmd : {tr, ev}) {
    cmd->add_option("-c,--config", config, "Pipeline config (JSON)")->required();
    cmd->add_option("--dataset", dataset, "Override paths.dataset");
    cmd->add_option("-o,--output", output, "Override paths.output");
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  if (*seed_opt) g.seed = seed;

  try {
    if (*lbp) return cmd_lbp(input, output, lbp_flags, out);
    if (*embed) return cmd_embed(points, dims, output, g, out);
    if (*encode) return cmd_encode(dataset, embedding, output, lbp_flags, single, g, out);
    if (*syn) return cmd_synth(output, synth, g, out);
    if (*tr) return cmd_train(config, g, dataset, output, out);
    if (*ev) return cmd_eval(config, g, dataset, output, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}

}  // namespace texnet::cli
