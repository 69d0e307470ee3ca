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

// Hamiltonian families: the open Bose-Hubbard chain on a fixed-N Fock basis
// and the Gaussian unitary ensemble.

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "fumes/core.hpp"
#include "fumes/random.hpp"

namespace fumes {

using Occupation = std::vector<int>;

std::string to_string(const Occupation& n);

/// C(n, k) with overflow saturating at UINT64_MAX.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

/// All L-site occupation tuples with N bosons, in descending lexicographic
/// order, so index 0 is (N, 0, ..., 0).
class FockBasis {
 public:
  static constexpr std::uint64_t kDefaultDimensionCap = 10000;

  FockBasis(int n_bosons, int n_sites, std::uint64_t dimension_cap = kDefaultDimensionCap);

  int bosons() const { return n_bosons_; }
  int sites() const { return n_sites_; }
  Index dim() const { return static_cast<Index>(states_.size()); }
  const std::vector<Occupation>& states() const { return states_; }
  const Occupation& state(Index i) const { return states_.at(static_cast<std::size_t>(i)); }

  /// Throws ValidationError if `n` is not in the basis.
  Index index_of(const Occupation& n) const;
  bool contains(const Occupation& n) const { return index_.count(n) != 0; }

  /// Basis vector for a tuple.
  StateVector fock_state(const Occupation& n) const;

 private:
  int n_bosons_;
  int n_sites_;
  std::vector<Occupation> states_;
  std::map<Occupation, Index> index_;
};

FockBasis enumerate_fock_basis(int n_bosons, int n_sites,
                               std::uint64_t dimension_cap = FockBasis::kDefaultDimensionCap);

struct BoseHubbardParams {
  double J = 1.0;  ///< tunnelling
  double U = 1.0;  ///< on-site interaction
  int L = 1;
  int N = 0;

  void validate() const;
  bool operator==(const BoseHubbardParams&) const = default;
};

/// H = -J sum_{j<L} (a_j^+ a_{j+1} + h.c.) + U/2 sum_j n_j (n_j - 1), open chain.
HermitianOperator build_bose_hubbard(const FockBasis& basis, const BoseHubbardParams& p);

/// GUE sample: off-diagonal entries complex Gaussian with Re, Im ~ N(0, 1/2),
/// diagonal real N(0, 1). Spectrum follows a semicircle of radius 2 sqrt(d).
HermitianOperator sample_gue(Index d, Rng& rng);

/// Eigenvector of the lowest eigenvalue. Throws AmbiguityError if the gap to
/// the next level is at most `degeneracy_tolerance`.
StateVector ground_state(const SpectralDecomposition& spec, double degeneracy_tolerance = 1e-10);

/// True iff some eigenstate has |<psi_m|target>|^2 <= 0.1^d; such
/// (Hamiltonian, target) pairs are excluded from benchmarks.
bool is_pathological_target(const SpectralDecomposition& spec, const StateVector& target, Index d);

}  // namespace fumes
