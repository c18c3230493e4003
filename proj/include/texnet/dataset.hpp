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
#include <vector>

namespace texnet {

struct Sample {
  std::filesystem::path path;  // relative to the dataset root
  int label = 0;
};

// Folder-per-class image collection in lexicographic order.
struct DatasetIndex {
  std::filesystem::path root;
  std::vector<std::string> classes;
  std::vector<Sample> samples;  // grouped by class, then by path
  std::vector<std::size_t> counts;

  std::size_t size() const noexcept { return samples.size(); }
};

// Throws IoError if root is missing and DataError for fewer than two classes
// or a class folder without images.
DatasetIndex index_dataset(const std::filesystem::path& root);

struct SplitPlan {
  double train_ratio = 0.5;
  std::size_t repetitions = 10;
  std::uint64_t seed = 1;

  void validate() const;
  // Run i draws its split from seed + i.
  std::uint64_t run_seed(std::size_t run) const { return seed + run; }
};

struct Split {
  std::vector<std::size_t> train;  // sample indices, ascending
  std::vector<std::size_t> test;
};

// Per class: floor(ratio * n + 0.5) training samples, clamped to [1, n - 1].
std::size_t train_count(double ratio, std::size_t class_size);

// Stratified random splits, one per repetition. Throws DataError naming any
// class with fewer than two samples.
std::vector<Split> make_splits(const DatasetIndex& index, const SplitPlan& plan);

}  // namespace texnet
