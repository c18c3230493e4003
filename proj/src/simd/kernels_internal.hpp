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

#include "texnet/simd/kernels.hpp"

namespace texnet::simd {

// Shared by the vector variants for their remainder columns.
double scalar_tap_value(const double* image, std::size_t width, std::size_t row,
                        std::size_t col, const LbpTap& tap);

#if defined(TEXNET_HAVE_AVX2)
const KernelTable& avx2_kernel_table();
#endif

}  // namespace texnet::simd
