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

#include "texnet/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "texnet/error.hpp"
#include "texnet/image_io.hpp"

namespace texnet {
namespace fs = std::filesystem;

DatasetIndex index_dataset(const fs::path& root) {
  if (!fs::is_directory(root)) {
    throw IoError("dataset root '" + root.string() + "' is not a directory");
  }
  DatasetIndex idx;
  idx.root = root;
  std::vector<fs::path> dirs;
  for (const auto& e : fs::directory_iterator(root)) {
    if (e.is_directory()) dirs.push_back(e.path());
  }
  std::sort(dirs.begin(), dirs.end());
  if (dirs.size() < 2) {
    throw DataError("dataset root '" + root.string() + "' needs at least two class folders, found " +
                    std::to_string(dirs.size()));
  }
  for (const fs::path& dir : dirs) {
    std::vector<fs::path> files;
    for (const auto& e : fs::recursive_directory_iterator(dir)) {
      if (e.is_regular_file() && is_image_file(e.path())) files.push_back(fs::relative(e.path(), root));
    }
    if (files.empty()) {
      throw DataError("class folder '" + dir.filename().string() + "' contains no images");
    }
    std::sort(files.begin(), files.end());
    const int label = static_cast<int>(idx.classes.size());
    idx.classes.push_back(dir.filename().string());
    idx.counts.push_back(files.size());
    for (auto& f : files) idx.samples.push_back({std::move(f), label});
  }
  return idx;
}

void SplitPlan::validate() const {
  if (!(train_ratio > 0.0 && train_ratio < 1.0)) {
    throw ConfigError("eval.train_ratio must lie strictly between 0 and 1");
  }
  if (repetitions == 0) throw ConfigError("eval.repetitions must be positive");
}

std::size_t train_count(double ratio, std::size_t class_size) {
  const auto k = static_cast<std::size_t>(std::floor(ratio * static_cast<double>(class_size) + 0.5));
  return std::clamp<std::size_t>(k, 1, class_size - 1);
}

std::vector<Split> make_splits(const DatasetIndex& index, const SplitPlan& plan) {
  plan.validate();
  std::vector<std::vector<std::size_t>> members(index.classes.size());
  for (std::size_t i = 0; i < index.samples.size(); ++i) {
    members[static_cast<std::size_t>(index.samples[i].label)].push_back(i);
  }
  for (std::size_t c = 0; c < members.size(); ++c) {
    if (members[c].size() < 2) {
      throw DataError("class '" + index.classes[c] + "' has " + std::to_string(members[c].size()) +
                      " sample(s); a split needs at least one training and one test image");
    }
  }
  std::vector<Split> out;
  for (std::size_t run = 0; run < plan.repetitions; ++run) {
    std::mt19937_64 rng(plan.run_seed(run));
    Split s;
    for (const auto& m : members) {
      std::vector<std::size_t> shuffled = m;
      std::shuffle(shuffled.begin(), shuffled.end(), rng);
      const std::size_t k = train_count(plan.train_ratio, m.size());
      s.train.insert(s.train.end(), shuffled.begin(), shuffled.begin() + k);
      s.test.insert(s.test.end(), shuffled.begin() + k, shuffled.end());
    }
    std::sort(s.train.begin(), s.train.end());
    std::sort(s.test.begin(), s.test.end());
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace texnet
