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


// Experiment orchestration. This is the only layer that creates
// concurrency: ensembles fan out over `workers` threads, every trajectory or
// Hamiltonian draws from its own counter-derived seed, and results are
// reduced in index order, so outputs do not depend on the worker count.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fumes/analysis.hpp"
#include "fumes/config.hpp"
#include "fumes/protocols.hpp"
#include "fumes/table.hpp"

namespace fumes {

inline constexpr const char* kVersion = "0.1.0";

/// Stream tags for derive_seed(master, index, stream).
namespace streams {
inline constexpr std::uint64_t kHamiltonian = 1;
inline constexpr std::uint64_t kTrajectory = 2;
inline constexpr std::uint64_t kHaar = 3;
inline constexpr std::uint64_t kSubsets = 4;
inline constexpr std::uint64_t kSeries = 5;
}  // namespace streams

struct BoseHubbardSystem {
  FockBasis basis;
  HermitianOperator hamiltonian;
  SpectralDecomposition spec;
  StateVector ground;
};

BoseHubbardSystem make_bose_hubbard_system(const BoseHubbardParams& p);

/// Scheme for a Bose-Hubbard experiment (fock or z target).
MeasurementScheme make_bose_hubbard_scheme(const FockBasis& basis, Granularity g, const Occupation& fock_target,
                                           HalfInteger z_target);

/// Scheme with computational basis state 0 as target (GUE experiments).
MeasurementScheme make_gue_scheme(Index d, Granularity g);

struct FumesRun {
  SuccessCurve curve;
  double mean_wait = 0.0;
  /// Exact: per failure state (granular) or per round (binary). Monte
  /// Carlo: every recorded step.
  std::vector<double> p_star;
  std::size_t stuck = 0;
  std::size_t not_reached = 0;
};

/// Exact (granular: Markov chain, binary: failure path) or Monte Carlo.
/// Monte Carlo trajectory i uses seed derive_seed(seed, i, streams::kTrajectory).
FumesRun run_fumes(const SpectralDecomposition& spec, const StateVector& init, const MeasurementScheme& scheme,
                   const ProtocolConfig& cfg, Method method, int r_max, std::size_t trajectories, std::uint64_t seed,
                   int workers);

struct GueEnsemble {
  Index d = 0;
  std::size_t accepted = 0;
  std::size_t rejected = 0;  ///< pathological (H, target) pairs skipped
  std::vector<FumesRun> runs;
  SuccessCurve mean_curve;            ///< stderr across Hamiltonians
  std::vector<double> d_eff_over_d;   ///< per-Hamiltonian scalar where defined
  std::vector<double> medo_theta;     ///< ground state vs target angle per Hamiltonian
};

/// GUE Hamiltonians are drawn from derive_seed(seed, attempt, kHamiltonian)
/// for attempt = 0, 1, ... until `n_hamiltonians` non-pathological ones are
/// found. Initial state: ground state. Target: basis state 0.
GueEnsemble run_gue_ensemble(Index d, std::size_t n_hamiltonians, Granularity g, const ProtocolConfig& cfg,
                             Method method, int r_max, std::size_t trajectories_per_hamiltonian, std::uint64_t seed,
                             int workers);

/// Fraction of GUE samples whose target (basis state 0) is pathological.
double pathology_rejection_rate(Index d, std::size_t samples, std::uint64_t seed, int workers = 1);

ResultTable run_experiment(const ExperimentConfig& cfg);

enum class Figure { fig2a, fig2b, fig3e, fig4, table1 };

struct ReproduceOptions {
  std::uint64_t seed = 20260101;
  std::optional<std::size_t> trajectories;  ///< overrides ensemble/trajectory counts
  int workers = 1;
  bool full_scale = false;
};

ResultTable reproduce(Figure fig, const ReproduceOptions& opt);

}  // namespace fumes
