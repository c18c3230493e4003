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

#include <cstddef>
#include <filesystem>

#include "texnet/network.hpp"

namespace texnet {

// Layout: "TEXNETCK", u64 little-endian header length, JSON header
// {spec, seed, epoch, blocks: [{name, size}]}, then every parameter block as
// little-endian float64 in declaration order.
void save_checkpoint(const std::filesystem::path& path, Network& net, std::size_t epoch);

struct LoadedCheckpoint {
  Network net;
  std::size_t epoch = 0;
};

// Throws IoError for unreadable or truncated files and ConfigError when the
// header does not describe the stored blocks.
LoadedCheckpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace texnet
