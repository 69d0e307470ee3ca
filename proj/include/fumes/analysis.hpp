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
#include <map>
#include <optional>
#include <vector>

#include "fumes/core.hpp"
#include "fumes/hamiltonians.hpp"
#include "fumes/measurement.hpp"
#include "fumes/random.hpp"
#include "fumes/records.hpp"

namespace fumes {

/// p(r) = fraction of records with success_round <= r, with binomial
/// standard errors.
SuccessCurve aggregate_success(const std::vector<TrajectoryRecord>& records, int r_max);

/// d_eff(r) = 1 / (1 - (1 - p(r))^(1/r)); nullopt where p(r) is 0 or 1.
std::vector<std::optional<double>> effective_dimension(const SuccessCurve& curve);

/// Average of the defined d_eff(r) over r in [r_lo, r_hi].
std::optional<double> mean_effective_dimension(const SuccessCurve& curve, int r_lo = 2, int r_hi = 20);

using SignVector = std::vector<int>;

/// F = 4 Var(S(w)), S(w) = sum_j w_j n_j.
double fisher_information(const StateVector& state, const SignVector& w, const FockBasis& basis);

struct MacroscopicityResult {
  double n_eff = 0.0;
  SignVector argmax_w;
  double fisher = 0.0;
};

inline constexpr int kMacroscopicitySiteCap = 24;

/// Exhaustive maximum over w in {+-1}^L with w_1 = +1; ties go to the
/// lexicographically smallest w (-1 before +1).
MacroscopicityResult macroscopicity(const StateVector& state, const FockBasis& basis);

/// Normalized standard complex Gaussian combination of the columns.
StateVector sample_haar_state(const CMatrix& subspace_basis, Rng& rng);

/// Columns spanning the Z = z sector, or the whole space for nullopt.
CMatrix z_subspace_basis(const FockBasis& basis, std::optional<HalfInteger> z);

struct SampleMean {
  double mean = 0.0;
  double stderr_mean = 0.0;
  std::size_t n = 0;
};

/// Haar sample i uses stream derive_seed(master_seed, i).
SampleMean mean_macroscopicity(const FockBasis& basis, std::optional<HalfInteger> z, std::size_t n_samples,
                               std::uint64_t master_seed, int workers = 1);

std::map<HalfInteger, double> z_value_probabilities(const StateVector& state, const FockBasis& basis);

}  // namespace fumes
