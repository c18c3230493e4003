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
#include <span>
#include <vector>

#include "texnet/tensor.hpp"

namespace texnet {

struct SvmConfig {
  double lambda = 1e-4;
  std::size_t epochs = 200;
  std::uint64_t seed = 1;

  void validate() const;
};

// One-vs-all linear classifiers: score_c(x) = w_c . x + b_c.
struct LinearModel {
  std::size_t classes = 0;
  std::size_t dims = 0;
  std::vector<double> weights;  // classes x dims
  std::vector<double> biases;

  std::vector<double> scores(std::span<const double> x) const;
  // Highest score wins; ties go to the lower class id.
  int predict(std::span<const double> x) const;
};

// Hinge-loss subgradient descent per class (labels +1 for the class, -1 for
// the rest) with L2 penalty lambda/2 |w|^2 on the weights only. Step size
// 1 / (1 + lambda t) over seeded shuffled passes.
LinearModel train_linear_ova(const Tensor& features, std::span<const int> labels,
                             std::size_t class_count, const SvmConfig& cfg = {});

struct RunMetrics {
  std::size_t correct = 0;  // S_p
  std::size_t total = 0;    // S_t
  double accuracy = 0.0;
  std::vector<std::vector<std::size_t>> confusion;  // rows = true class
};

RunMetrics evaluate(const LinearModel& model, const Tensor& features, std::span<const int> labels);

// Rows divided by their L2 norm; zero rows stay zero.
Tensor l2_normalize_rows(const Tensor& features);

}  // namespace texnet
