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
#include <string>
#include <vector>

#include "fumes/core.hpp"
#include "fumes/hamiltonians.hpp"
#include "fumes/random.hpp"

namespace fumes {

/// A value in (1/2)Z stored as twice the value, so grouping by Z never
/// compares floats.
struct HalfInteger {
  long twice = 0;

  static HalfInteger from_twice(long t) { return HalfInteger{t}; }
  static HalfInteger from_int(long v) { return HalfInteger{2 * v}; }
  double value() const { return 0.5 * static_cast<double>(twice); }
  std::string str() const;
  auto operator<=>(const HalfInteger&) const = default;
};

/// A complete family of mutually orthogonal projectors with one target.
///
/// Projector i is stored as an orthonormal column basis Phi_i (d x rank_i),
/// P_i = Phi_i Phi_i^dagger. The concatenated bases form a unitary, which is
/// checked on construction; that single check covers idempotence, pairwise
/// orthogonality and completeness.
class MeasurementScheme {
 public:
  MeasurementScheme(std::vector<CMatrix> projector_bases, Index target_index, std::vector<std::string> labels);

  Index dim() const { return dim_; }
  Index outcome_count() const { return static_cast<Index>(offsets_.size()); }
  /// M, the number of distinguishable failure outcomes.
  Index failure_count() const { return outcome_count() - 1; }
  Index target_index() const { return target_; }
  Index target_rank() const { return rank(target_); }

  Index rank(Index i) const { return sizes_.at(static_cast<std::size_t>(i)); }
  /// Columns of the concatenated basis belonging to outcome i.
  auto basis(Index i) const { return columns_.middleCols(offsets_.at(static_cast<std::size_t>(i)), rank(i)); }
  const CMatrix& all_columns() const { return columns_; }
  Index column_offset(Index i) const { return offsets_.at(static_cast<std::size_t>(i)); }
  const std::string& label(Index i) const { return labels_.at(static_cast<std::size_t>(i)); }

  /// Dense P_i. O(d^2) memory; meant for checks and small systems.
  HermitianOperator projector(Index i) const;
  CMatrix target_basis() const { return basis(target_); }
  bool failures_rank_one() const;

 private:
  Index dim_ = 0;
  Index target_ = 0;
  CMatrix columns_;
  std::vector<Index> offsets_;
  std::vector<Index> sizes_;
  std::vector<std::string> labels_;
};

struct MeasurementOutcome {
  Index outcome_index = 0;
  double probability = 0.0;
  StateVector collapsed;
  bool success = false;
};

/// D = sum_k |sum_{l<=k} (n_l - m_l)|, the number of nearest-neighbour hops
/// between two occupation tuples.
int fock_distance(const Occupation& n, const Occupation& m);

/// |sum_j (-1)^j n_j| / 2.
HalfInteger parity_imbalance(const Occupation& n);

/// One rank-1 projector per Fock state; target states merged into the target
/// projector, placed at the position of the first target state.
MeasurementScheme build_granular_scheme(const FockBasis& basis, const Occupation& target);
MeasurementScheme build_granular_scheme(const FockBasis& basis, const std::vector<Occupation>& target_subspace);

/// Granular scheme in the computational basis of a d-dimensional space with
/// basis state `target` as target.
MeasurementScheme build_computational_scheme(Index d, Index target);

/// {P_t, 1 - P_t}; target index 0.
MeasurementScheme build_binary_scheme(const HermitianOperator& target_projector);

/// Failure outcomes grouped by Fock distance to the target, ascending D;
/// target (D = 0) at index 0.
MeasurementScheme build_subspace_scheme(const FockBasis& basis, const Occupation& target);

/// One projector per attained value of Z, ascending; `target_z` selects the
/// target outcome.
MeasurementScheme build_parity_imbalance_scheme(const FockBasis& basis, HalfInteger target_z);
std::vector<HalfInteger> parity_values(const FockBasis& basis);

/// Born probabilities, clipped to [0, 1]. Throws NumericalError if a raw value
/// is below -1e-12 or the total misses 1 by more than 1e-9.
std::vector<double> outcome_probabilities(const StateVector& state, const MeasurementScheme& scheme);

/// Draw an outcome, project and renormalize.
MeasurementOutcome measure(const StateVector& state, const MeasurementScheme& scheme, Rng& rng);

/// Project onto outcome i and renormalize (no sampling).
StateVector collapse(const StateVector& state, const MeasurementScheme& scheme, Index outcome);

struct ReachabilityViolation {
  std::vector<Index> outcomes;  ///< failure outcome indices whose sum commutes with H
  double commutator_norm = 0.0;
};

struct ReachabilityReport {
  bool reachable = true;
  bool exhaustive = true;  ///< false: singletons + random subsets only
  std::uint64_t subsets_checked = 0;
  std::uint64_t violation_count = 0;
  /// First `max_reported` violations, in enumeration order.
  std::vector<ReachabilityViolation> violations;
};

struct ReachabilityOptions {
  int subset_cap = 20;
  int sampled_subsets = 1000;
  std::uint64_t sample_seed = 0;
  double tolerance = 1e-9;
  std::size_t max_reported = 1000;
  /// With subset_cap exceeded: throw CapacityError instead of sampling.
  bool require_exhaustive = false;
};

/// Search for sums of failure projectors that commute with H. The target is
/// reachable from every failure state iff no such sum exists.
///
/// The Frobenius norm of [Q_S, H] is computed from block couplings of H in
/// the scheme's basis, ||[Q_S, H]||_F^2 = 2 sum_{i in S, j not in S} ||P_i H P_j||_F^2,
/// so each subset costs O(M^2) instead of a d x d commutator.
ReachabilityReport check_reachability(const HermitianOperator& h, const MeasurementScheme& scheme,
                                      const ReachabilityOptions& options = {});

}  // namespace fumes
