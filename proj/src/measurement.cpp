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

#include "fumes/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "fumes/errors.hpp"

namespace fumes {

std::string HalfInteger::str() const {
  if (twice % 2 == 0) return std::to_string(twice / 2);
  return std::to_string(twice) + "/2";
}

MeasurementScheme::MeasurementScheme(std::vector<CMatrix> projector_bases, Index target_index,
                                     std::vector<std::string> labels)
    : target_(target_index), labels_(std::move(labels)) {
  if (projector_bases.size() < 2) throw ValidationError("MeasurementScheme: need a target and at least one failure outcome");
  if (labels_.size() != projector_bases.size()) throw ValidationError("MeasurementScheme: one label per projector required");
  if (target_ < 0 || target_ >= static_cast<Index>(projector_bases.size())) {
    throw ValidationError("MeasurementScheme: target index out of range");
  }
  dim_ = projector_bases.front().rows();
  Index total = 0;
  for (const auto& b : projector_bases) {
    if (b.rows() != dim_) throw ValidationError("MeasurementScheme: projector dimensions differ");
    if (b.cols() == 0) throw ValidationError("MeasurementScheme: empty projector");
    offsets_.push_back(total);
    sizes_.push_back(b.cols());
    total += b.cols();
  }
  if (total != dim_) {
    throw ValidationError("MeasurementScheme: projector ranks sum to " + std::to_string(total) + ", not " +
                          std::to_string(dim_));
  }
  columns_.resize(dim_, dim_);
  for (std::size_t i = 0; i < projector_bases.size(); ++i) columns_.middleCols(offsets_[i], sizes_[i]) = projector_bases[i];
  const double residual = (columns_.adjoint() * columns_ - CMatrix::Identity(dim_, dim_)).cwiseAbs().maxCoeff();
  if (!(residual <= 1e-9)) {
    std::ostringstream msg;
    msg << "MeasurementScheme: projectors are not an orthogonal partition of unity (residual " << residual << ")";
    throw ValidationError(msg.str());
  }
}

HermitianOperator MeasurementScheme::projector(Index i) const {
  const auto b = basis(i);
  CMatrix p = b * b.adjoint();
  p = 0.5 * (p + p.adjoint()).eval();
  return HermitianOperator(std::move(p));
}

bool MeasurementScheme::failures_rank_one() const {
  for (Index i = 0; i < outcome_count(); ++i) {
    if (i != target_ && rank(i) != 1) return false;
  }
  return true;
}

int fock_distance(const Occupation& n, const Occupation& m) {
  if (n.size() != m.size()) throw ValidationError("fock_distance: tuples have different site counts");
  const int sum_n = std::accumulate(n.begin(), n.end(), 0);
  const int sum_m = std::accumulate(m.begin(), m.end(), 0);
  if (sum_n != sum_m) {
    throw ValidationError("fock_distance: particle numbers differ (" + std::to_string(sum_n) + " vs " +
                          std::to_string(sum_m) + ")");
  }
  int partial = 0;
  int distance = 0;
  for (std::size_t k = 0; k < n.size(); ++k) {
    partial += n[k] - m[k];
    distance += std::abs(partial);
  }
  return distance;
}

HalfInteger parity_imbalance(const Occupation& n) {
  long s = 0;
  for (std::size_t j = 0; j < n.size(); ++j) s += (j % 2 == 0 ? -1 : 1) * n[j];
  return HalfInteger::from_twice(std::labs(s));
}

namespace {

CMatrix unit_columns(Index d, const std::vector<Index>& indices) {
  CMatrix b = CMatrix::Zero(d, static_cast<Index>(indices.size()));
  for (std::size_t c = 0; c < indices.size(); ++c) b(indices[c], static_cast<Index>(c)) = 1.0;
  return b;
}

// Build a scheme whose projectors are coordinate subspaces given by a key per
// basis state. Outcomes are ordered by key.
template <class Key, class LabelFn>
MeasurementScheme grouped_scheme(const FockBasis& basis, const std::vector<Key>& keys, const Key& target_key,
                                 LabelFn label) {
  std::map<Key, std::vector<Index>> groups;
  for (Index i = 0; i < basis.dim(); ++i) groups[keys[static_cast<std::size_t>(i)]].push_back(i);
  if (groups.count(target_key) == 0) throw ValidationError("target value is not attained by any basis state");
  if (groups.size() < 2) throw ValidationError("scheme has no failure outcome: every basis state is a target state");
  std::vector<CMatrix> bases;
  std::vector<std::string> labels;
  Index target = 0;
  for (const auto& [key, members] : groups) {
    if (key == target_key) target = static_cast<Index>(bases.size());
    bases.push_back(unit_columns(basis.dim(), members));
    labels.push_back(label(key));
  }
  return MeasurementScheme(std::move(bases), target, std::move(labels));
}

}  // namespace

MeasurementScheme build_granular_scheme(const FockBasis& basis, const Occupation& target) {
  return build_granular_scheme(basis, std::vector<Occupation>{target});
}

MeasurementScheme build_granular_scheme(const FockBasis& basis, const std::vector<Occupation>& target_subspace) {
  if (target_subspace.empty()) throw ValidationError("build_granular_scheme: empty target");
  std::set<Index> target_set;
  for (const auto& n : target_subspace) target_set.insert(basis.index_of(n));
  if (static_cast<Index>(target_set.size()) == basis.dim()) {
    throw ValidationError("build_granular_scheme: target spans the whole space, no failure outcome");
  }
  std::vector<CMatrix> bases;
  std::vector<std::string> labels;
  Index target = -1;
  for (Index i = 0; i < basis.dim(); ++i) {
    if (target_set.count(i)) {
      if (target >= 0) continue;
      target = static_cast<Index>(bases.size());
      bases.push_back(unit_columns(basis.dim(), {target_set.begin(), target_set.end()}));
      labels.push_back(target_set.size() == 1 ? to_string(basis.state(i)) : "target");
    } else {
      bases.push_back(unit_columns(basis.dim(), {i}));
      labels.push_back(to_string(basis.state(i)));
    }
  }
  return MeasurementScheme(std::move(bases), target, std::move(labels));
}

MeasurementScheme build_computational_scheme(Index d, Index target) {
  if (d < 2) throw ValidationError("build_computational_scheme: dimension must be >= 2");
  if (target < 0 || target >= d) throw ValidationError("build_computational_scheme: target out of range");
  std::vector<CMatrix> bases;
  std::vector<std::string> labels;
  for (Index i = 0; i < d; ++i) {
    bases.push_back(unit_columns(d, {i}));
    labels.push_back("|" + std::to_string(i) + ">");
  }
  return MeasurementScheme(std::move(bases), target, std::move(labels));
}

MeasurementScheme build_binary_scheme(const HermitianOperator& target_projector) {
  const CMatrix& p = target_projector.matrix();
  const Index d = p.rows();
  const double idem = (p * p - p).cwiseAbs().maxCoeff();
  if (!(idem <= 1e-9)) throw ValidationError("build_binary_scheme: operator is not a projector (P^2 != P)");
  const auto rank = static_cast<Index>(std::llround(p.trace().real()));
  if (rank < 1) throw ValidationError("build_binary_scheme: target projector has rank 0");
  if (rank >= d) throw ValidationError("build_binary_scheme: target projector is the identity, no failure outcome");

  // Coordinate projectors keep exact unit vectors; anything else goes through
  // an eigendecomposition.
  const bool diagonal = (p - CMatrix(p.diagonal().asDiagonal())).cwiseAbs().maxCoeff() <= 1e-12;
  CMatrix target_basis;
  CMatrix failure_basis;
  if (diagonal) {
    std::vector<Index> in, out;
    for (Index i = 0; i < d; ++i) (p(i, i).real() > 0.5 ? in : out).push_back(i);
    target_basis = unit_columns(d, in);
    failure_basis = unit_columns(d, out);
  } else {
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(p);
    // eigenvalues ascending: d - rank zeros, then rank ones
    failure_basis = solver.eigenvectors().leftCols(d - rank);
    target_basis = solver.eigenvectors().rightCols(rank);
  }
  return MeasurementScheme({target_basis, failure_basis}, 0, {"target", "fail"});
}

MeasurementScheme build_subspace_scheme(const FockBasis& basis, const Occupation& target) {
  basis.index_of(target);
  std::vector<int> keys;
  keys.reserve(static_cast<std::size_t>(basis.dim()));
  for (const auto& n : basis.states()) keys.push_back(fock_distance(n, target));
  return grouped_scheme(basis, keys, 0, [](int dist) { return "D=" + std::to_string(dist); });
}

std::vector<HalfInteger> parity_values(const FockBasis& basis) {
  std::set<HalfInteger> values;
  for (const auto& n : basis.states()) values.insert(parity_imbalance(n));
  return {values.begin(), values.end()};
}

MeasurementScheme build_parity_imbalance_scheme(const FockBasis& basis, HalfInteger target_z) {
  std::vector<HalfInteger> keys;
  keys.reserve(static_cast<std::size_t>(basis.dim()));
  for (const auto& n : basis.states()) keys.push_back(parity_imbalance(n));
  try {
    return grouped_scheme(basis, keys, target_z, [](HalfInteger z) { return "Z=" + z.str(); });
  } catch (const ValidationError& e) {
    throw ValidationError("build_parity_imbalance_scheme: Z=" + target_z.str() + ": " + e.what());
  }
}

std::vector<double> outcome_probabilities(const StateVector& state, const MeasurementScheme& scheme) {
  if (state.dim() != scheme.dim()) throw ValidationError("outcome_probabilities: dimension mismatch");
  const CVector coords = scheme.all_columns().adjoint() * state.amplitudes();
  std::vector<double> p(static_cast<std::size_t>(scheme.outcome_count()));
  double total = 0.0;
  for (Index i = 0; i < scheme.outcome_count(); ++i) {
    const double raw = coords.segment(scheme.column_offset(i), scheme.rank(i)).squaredNorm();
    if (raw < -1e-12) throw NumericalError("outcome_probabilities: negative Born probability");
    p[static_cast<std::size_t>(i)] = std::clamp(raw, 0.0, 1.0);
    total += raw;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    std::ostringstream msg;
    msg << "outcome_probabilities: probabilities sum to " << total;
    throw NumericalError(msg.str());
  }
  return p;
}

StateVector collapse(const StateVector& state, const MeasurementScheme& scheme, Index outcome) {
  const auto b = scheme.basis(outcome);
  return StateVector::normalized(b * (b.adjoint() * state.amplitudes()));
}

MeasurementOutcome measure(const StateVector& state, const MeasurementScheme& scheme, Rng& rng) {
  const std::vector<double> p = outcome_probabilities(state, scheme);
  const double total = std::accumulate(p.begin(), p.end(), 0.0);
  const double u = uniform01(rng) * total;
  double acc = 0.0;
  Index chosen = -1;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] <= 0.0) continue;
    chosen = static_cast<Index>(i);
    acc += p[i];
    if (u < acc) break;
  }
  if (chosen < 0) throw NumericalError("measure: all outcome probabilities vanish");
  return MeasurementOutcome{chosen, p[static_cast<std::size_t>(chosen)], collapse(state, scheme, chosen),
                            chosen == scheme.target_index()};
}

namespace {

// ||[Q_S, H]||_F for the failure subset S, from block couplings C.
double subset_commutator_norm(const RMatrix& coupling, const std::vector<char>& in_subset) {
  const Index n = coupling.rows();
  double sum = 0.0;
  for (Index i = 0; i < n; ++i) {
    if (!in_subset[static_cast<std::size_t>(i)]) continue;
    for (Index j = 0; j < n; ++j) {
      if (!in_subset[static_cast<std::size_t>(j)]) sum += coupling(i, j);
    }
  }
  return std::sqrt(2.0 * sum);
}

}  // namespace

ReachabilityReport check_reachability(const HermitianOperator& h, const MeasurementScheme& scheme,
                                      const ReachabilityOptions& options) {
  if (h.dim() != scheme.dim()) throw ValidationError("check_reachability: dimension mismatch");
  const Index n_out = scheme.outcome_count();
  const Index m = scheme.failure_count();
  const bool exhaustive = m <= options.subset_cap;
  if (!exhaustive && options.require_exhaustive) {
    throw CapacityError("check_reachability: " + std::to_string(m) + " failure outcomes exceed the subset cap of " +
                        std::to_string(options.subset_cap) + "; use per-projector screening (sampled mode)");
  }

  const CMatrix& phi = scheme.all_columns();
  const CMatrix rotated = phi.adjoint() * h.matrix() * phi;
  RMatrix coupling = RMatrix::Zero(n_out, n_out);
  for (Index i = 0; i < n_out; ++i) {
    for (Index j = 0; j < n_out; ++j) {
      if (i == j) continue;
      coupling(i, j) =
          rotated.block(scheme.column_offset(i), scheme.column_offset(j), scheme.rank(i), scheme.rank(j)).squaredNorm();
    }
  }

  std::vector<Index> failures;
  for (Index i = 0; i < n_out; ++i) {
    if (i != scheme.target_index()) failures.push_back(i);
  }

  ReachabilityReport report;
  report.exhaustive = exhaustive;
  std::vector<char> in_subset(static_cast<std::size_t>(n_out), 0);
  auto screen = [&](const std::vector<char>& mask) {
    ++report.subsets_checked;
    const double norm = subset_commutator_norm(coupling, mask);
    if (norm < options.tolerance) {
      ++report.violation_count;
      if (report.violations.size() >= options.max_reported) return;
      ReachabilityViolation v;
      for (Index i = 0; i < n_out; ++i) {
        if (mask[static_cast<std::size_t>(i)]) v.outcomes.push_back(i);
      }
      v.commutator_norm = norm;
      report.violations.push_back(std::move(v));
    }
  };

  if (exhaustive) {
    const std::uint64_t count = std::uint64_t{1} << m;
    for (std::uint64_t bits = 1; bits < count; ++bits) {
      std::fill(in_subset.begin(), in_subset.end(), 0);
      for (Index b = 0; b < m; ++b) {
        if (bits >> b & 1U) in_subset[static_cast<std::size_t>(failures[static_cast<std::size_t>(b)])] = 1;
      }
      screen(in_subset);
    }
  } else {
    for (Index f : failures) {
      std::fill(in_subset.begin(), in_subset.end(), 0);
      in_subset[static_cast<std::size_t>(f)] = 1;
      screen(in_subset);
    }
    Rng rng(options.sample_seed);
    for (int s = 0; s < options.sampled_subsets; ++s) {
      std::fill(in_subset.begin(), in_subset.end(), 0);
      bool any = false;
      for (Index f : failures) {
        const bool pick = (rng() >> 63) != 0;
        in_subset[static_cast<std::size_t>(f)] = pick;
        any = any || pick;
      }
      if (any) screen(in_subset);
    }
  }
  report.reachable = report.violation_count == 0;
  return report;
}

}  // namespace fumes
