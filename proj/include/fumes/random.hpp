// Copyright 2026 The fumes Authors
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
#include <random>

#include "fumes/core.hpp"

namespace fumes {

/// Every stochastic routine takes one of these explicitly; there is no
/// global generator.
using Rng = std::mt19937_64;

/// Counter-based stream derivation: the seed of stream `index` under
/// `master` is splitmix64 applied to (master, stream tag, index). Streams are
/// independent of the order in which they are requested.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index, std::uint64_t stream = 0);

inline Rng make_rng(std::uint64_t master, std::uint64_t index, std::uint64_t stream = 0) {
  return Rng(derive_seed(master, index, stream));
}

/// Standard complex Gaussian: real and imaginary parts N(0, 1/2).
Complex complex_gaussian(Rng& rng);

/// Uniform on [0, 1).
double uniform01(Rng& rng);

}  // namespace fumes
