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

// Control protocols: measurement-driven steering with optimized waiting
// times (FUMES), and the baselines it is compared against (MUM, MEDO/MNEDO,
// bang-bang switching between two Hamiltonians).

#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "fumes/core.hpp"
#include "fumes/kernels.hpp"
#include "fumes/measurement.hpp"
#include "fumes/random.hpp"
#include "fumes/records.hpp"

namespace fumes {

enum class WaitPolicy { optimized, uniform_random };

struct ProtocolConfig {
  int grid_points = 8192;
  /// Spectral search window: t_max_factor * 2 pi / mean level spacing.
  double t_max_factor = 8.0;
  /// If > 0, an absolute search window that replaces the spectral rule.
  double t_max = 0.0;
  int refine_iters = 40;
  int max_rounds = 100;
  double rel_tol = 1e-10;
  WaitPolicy wait_policy = WaitPolicy::optimized;
  int bang_bang_sweeps = 3;
  int workers = 1;

  void validate() const;
  bool operator==(const ProtocolConfig&) const = default;
};

/// Upper end of the waiting-time search interval (0, T_max].
double search_window(const SpectralDecomposition& spec, const ProtocolConfig& cfg);

struct WaitTime {
  double t = 0.0;
  double p = 0.0;  ///< target population at t
  bool stationary = false;  ///< population constant in time (up to rel_tol)
};

/// Global 1-D maximization of the target population over waiting times.
///
/// The population is a trigonometric polynomial whose frequencies are bounded
/// by the spectral width W, so the grid spacing is capped at pi / (4 W) and
/// the grid maximum is a reliable anchor. Near-maximal grid peaks are refined
/// by golden-section search; among refined peaks within rel_tol of the best,
/// the earliest time wins.
class WaitTimeOptimizer {
 public:
  WaitTimeOptimizer(const SpectralDecomposition& spec, const ProtocolConfig& cfg);

  double t_max() const { return t_max_; }
  const std::vector<double>& grid() const { return evaluator_.times(); }
  const ProtocolConfig& config() const { return cfg_; }

  /// Phi^dagger V for a target basis Phi (d x K).
  CMatrix target_rows(const CMatrix& target_basis) const;

  WaitTime optimize(const CVector& coeffs, const CMatrix& rows) const;
  /// One result per column of `coeffs`; grid evaluation runs as a single
  /// batched kernel over cfg.workers threads.
  std::vector<WaitTime> optimize_batch(const CMatrix& coeffs, const CMatrix& rows) const;

  double population(const CVector& coeffs, const CMatrix& rows, double t) const;

 private:
  WaitTime select_peak(const CVector& coeffs, const CMatrix& rows, const double* values) const;

  ProtocolConfig cfg_;
  RVector energies_;
  CMatrix eigenvectors_;
  double t_max_;
  double bandwidth_;
  kernels::GridEvaluator evaluator_;
};

WaitTime optimal_wait_time(const SpectralDecomposition& spec, const StateVector& state,
                           const HermitianOperator& target_projector, const ProtocolConfig& cfg);

/// Runs measurement trajectories for one (Hamiltonian, scheme) pair. Holds
/// references to `spec` and `scheme`, which must outlive it.
class FumesSimulator {
 public:
  FumesSimulator(const SpectralDecomposition& spec, const MeasurementScheme& scheme, const ProtocolConfig& cfg);

  TrajectoryRecord run(const StateVector& init, std::uint64_t seed) const;
  const WaitTimeOptimizer& optimizer() const { return optimizer_; }
  const CMatrix& target_rows() const { return rows_; }

 private:
  const SpectralDecomposition& spec_;
  const MeasurementScheme& scheme_;
  WaitTimeOptimizer optimizer_;
  CMatrix rows_;
};

TrajectoryRecord run_fumes_trajectory(const SpectralDecomposition& spec, const StateVector& init,
                                      const MeasurementScheme& scheme, const ProtocolConfig& cfg,
                                      std::uint64_t seed);

/// Transition structure of FUMES under a granular scheme: every failure
/// collapses onto a fixed rank-1 state, so the protocol is a Markov chain on
/// failure outcomes with the target as absorbing state.
struct MarkovKernel {
  std::vector<Index> failure_outcomes;
  std::vector<WaitTime> waits;  ///< per failure outcome (empty for random waits)
  RMatrix transition;           ///< transition(to, from) among failure outcomes
  RVector success;              ///< success(from)
};

struct FumesCurveResult {
  SuccessCurve curve;
  WaitTime first_wait;  ///< from the initial state
  /// Expected waiting time per measurement, averaged over the occupation of
  /// each round up to r_max.
  double mean_wait = 0.0;
  /// p_star per failure state (Markov) or per round (failure path).
  std::vector<double> p_star;
};

FumesCurveResult fumes_markov_exact(const SpectralDecomposition& spec, const StateVector& init,
                                    const MeasurementScheme& scheme, const ProtocolConfig& cfg, int r_max);

MarkovKernel build_markov_kernel(const SpectralDecomposition& spec, const MeasurementScheme& scheme,
                                 const ProtocolConfig& cfg);

/// Exact curve for schemes with a single failure outcome (binary): the state
/// after a failure is deterministic, so p(r) = 1 - prod_j (1 - p_j).
FumesCurveResult fumes_failure_path_exact(const SpectralDecomposition& spec, const StateVector& init,
                                          const MeasurementScheme& scheme, const ProtocolConfig& cfg, int r_max);

// --- baselines ---------------------------------------------------------------

/// arccos |<target|init>|, in [0, pi/2].
double medo_angle(const StateVector& init, const StateVector& target);
/// cos(theta / r)^(2r)
double medo_success_probability(double theta, int r);
/// prod_j cos(v_j)^2
double mnedo_success_probability(const std::vector<double>& angles);
/// Projects successively onto the r evenly spaced states between init and
/// target; succeeds only if every projection succeeds.
bool run_medo_sequence(const StateVector& init, const StateVector& target, int r, Rng& rng);

/// 1 - (1 - 1/d)^r; d may be non-integer.
double mum_success_probability(int r, double d);
/// Columns f_j = d^{-1/2} sum_k exp(2 pi i j k / d) b_k for an orthonormal
/// basis b; every f_j has overlap 1/d with every b_k.
CMatrix dft_unbiased_basis(const CMatrix& basis);
/// Each round measures the unbiased basis, then the target projector
/// (column 0 of `target_basis`).
TrajectoryRecord run_mum_trajectory(const CMatrix& target_basis, const StateVector& init, int max_rounds,
                                    std::uint64_t seed);

struct BangBangResult {
  std::vector<double> fidelity;                    ///< index r = 0..cycles
  std::vector<std::pair<double, double>> durations;  ///< (t1, t2) per cycle
  double commutator_norm = 0.0;
  bool commuting = false;  ///< controllability lost
};

/// Cycles exp(-i H2 t2) exp(-i H1 t1) with durations chosen greedily per
/// cycle by coordinate ascent over (t1, t2), each coordinate a 1-D global
/// search. Fidelity is nondecreasing because t = 0 is always admissible.
BangBangResult run_bang_bang(const SpectralDecomposition& h1, const SpectralDecomposition& h2,
                             const StateVector& init, const StateVector& target, int cycles,
                             const ProtocolConfig& cfg);

}  // namespace fumes
