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


#include "fumes/harness.hpp"

#include <cmath>
#include <numbers>

#include "fumes/errors.hpp"
#include "fumes/kernels.hpp"

namespace fumes {

namespace {

using Json = nlohmann::ordered_json;

ProtocolConfig single_threaded(ProtocolConfig cfg) {
  cfg.workers = 1;
  return cfg;
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double stderr_of(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
}

/// Accepted GUE sample for `attempt`, or nullopt if its target is pathological.
std::optional<SpectralDecomposition> accept_gue(Index d, std::uint64_t seed, std::uint64_t attempt) {
  Rng rng = make_rng(seed, attempt, streams::kHamiltonian);
  SpectralDecomposition spec = eigendecompose(sample_gue(d, rng));
  if (is_pathological_target(spec, StateVector::basis_state(d, 0), d)) return std::nullopt;
  return spec;
}

/// Runs fn(attempt, spec) over accepted GUE samples in attempt order until n
/// are accepted. Batches are sized by the number still missing, so the set
/// of attempts evaluated does not depend on the worker count.
template <class Fn>
auto for_accepted_gue(Index d, std::size_t n, std::uint64_t seed, int workers, std::size_t& rejected, Fn&& fn)
    -> std::vector<decltype(fn(std::uint64_t{0}, std::declval<const SpectralDecomposition&>()))> {
  using R = decltype(fn(std::uint64_t{0}, std::declval<const SpectralDecomposition&>()));
  std::vector<R> out;
  rejected = 0;
  std::uint64_t next = 0;
  while (out.size() < n) {
    const std::size_t batch = n - out.size();
    auto results = kernels::parallel_map(batch, workers, [&](std::size_t i) -> std::optional<R> {
      const std::uint64_t attempt = next + i;
      const auto spec = accept_gue(d, seed, attempt);
      if (!spec) return std::nullopt;
      return fn(attempt, *spec);
    });
    for (auto& r : results) {
      if (r) {
        out.push_back(std::move(*r));
      } else {
        ++rejected;
      }
    }
    next += batch;
  }
  return out;
}

Cell optional_cell(const std::optional<double>& v) {
  if (v) return *v;
  return std::string();
}

Json rounded(double v) { return std::isfinite(v) ? Json(round_sig12(v)) : Json(format_number(v)); }

Json base_metadata(const ExperimentConfig& cfg) {
  Json j;
  j["version"] = kVersion;
  j["experiment"] = to_string(cfg.kind);
  j["config"] = serialize_config(cfg, false);
  j["seed_derivation"] =
      "splitmix64 chain over (master seed, stream tag, index); streams: 1 hamiltonian, 2 trajectory, 3 haar, "
      "4 subsets, 5 series";
  if (cfg.system == SystemKind::gue) {
    j["units"] =
        "hbar = 1; GUE entries: diagonal N(0,1), off-diagonal real and imaginary parts N(0,1/2); times in the "
        "inverse of that energy scale";
  } else {
    j["units"] = "hbar = 1; energies as given by J and U, times in the inverse of those units";
  }
  return j;
}

ResultTable curve_table(const SuccessCurve& c, std::optional<double> mum_dim) {
  ResultTable t;
  t.columns = {"r", "p", "one_minus_p", "stderr", "d_eff"};
  if (mum_dim) t.columns.push_back("p_mum");
  const auto d_eff = effective_dimension(c);
  for (int r = 1; r <= c.r_max(); ++r) {
    const auto i = static_cast<std::size_t>(r - 1);
    std::vector<Cell> row{std::int64_t{r}, c.p[i], 1.0 - c.p[i], c.stderr_p[i], optional_cell(d_eff[i])};
    if (mum_dim) row.emplace_back(mum_success_probability(r, *mum_dim));
    t.add_row(std::move(row));
  }
  return t;
}

StateVector target_state(const ExperimentConfig& cfg, const FockBasis& basis) {
  if (cfg.target != TargetKind::fock) throw ValidationError(to_string(cfg.kind) + " needs a fock target state");
  return basis.fock_state(cfg.fock_target);
}

std::string sign_string(const SignVector& w) {
  std::string s;
  for (int x : w) s += x > 0 ? '+' : '-';
  return s;
}

/// Monte Carlo MEDO curve from the 2-D reduction: init (cos theta, sin theta),
/// target (1, 0). Sequence r, trajectory i uses seed
/// derive_seed(derive_seed(seed, r, kSeries), i, kTrajectory).
SuccessCurve medo_monte_carlo(const std::vector<double>& thetas, int r_max, std::size_t n, std::uint64_t seed,
                              int workers) {
  SuccessCurve c;
  c.n_trajectories = n;
  const StateVector target = StateVector::basis_state(2, 0);
  for (int r = 1; r <= r_max; ++r) {
    const std::uint64_t sub = derive_seed(seed, static_cast<std::uint64_t>(r), streams::kSeries);
    const auto hits = kernels::parallel_map(n, workers, [&](std::size_t i) {
      const double th = thetas[i % thetas.size()];
      CVector a(2);
      a << std::cos(th), std::sin(th);
      Rng rng(derive_seed(sub, i, streams::kTrajectory));
      return run_medo_sequence(StateVector::normalized(a), target, r, rng) ? 1 : 0;
    });
    double k = 0.0;
    for (int h : hits) k += h;
    const double p = k / static_cast<double>(n);
    c.p.push_back(p);
    c.stderr_p.push_back(std::sqrt(p * (1.0 - p) / static_cast<double>(n)));
  }
  return c;
}

SuccessCurve medo_exact(const std::vector<double>& thetas, int r_max) {
  SuccessCurve c;
  for (int r = 1; r <= r_max; ++r) {
    double s = 0.0;
    for (double th : thetas) s += medo_success_probability(th, r);
    c.p.push_back(s / static_cast<double>(thetas.size()));
    c.stderr_p.push_back(0.0);
  }
  return c;
}

SuccessCurve mum_monte_carlo(const CMatrix& basis, const StateVector& init, int r_max, std::size_t n,
                             std::uint64_t seed, int workers) {
  const auto records = kernels::parallel_map(n, workers, [&](std::size_t i) {
    return run_mum_trajectory(basis, init, r_max, derive_seed(seed, i, streams::kTrajectory));
  });
  return aggregate_success(records, r_max);
}

ResultTable run_fumes_experiment(const ExperimentConfig& cfg) {
  Json meta = base_metadata(cfg);
  if (cfg.system == SystemKind::bose_hubbard) {
    const BoseHubbardSystem sys = make_bose_hubbard_system(cfg.bose_hubbard);
    const MeasurementScheme scheme = make_bose_hubbard_scheme(sys.basis, cfg.granularity, cfg.fock_target, cfg.z_target);
    const FumesRun run = run_fumes(sys.spec, sys.ground, scheme, cfg.protocol, cfg.method, cfg.r_max, cfg.trajectories,
                                   cfg.seed, cfg.workers);
    ResultTable t = curve_table(run.curve, std::nullopt);
    meta["dimension"] = sys.basis.dim();
    meta["failure_outcomes"] = scheme.failure_count();
    meta["mean_wait"] = rounded(run.mean_wait);
    const auto r99 = run.curve.first_round_reaching(0.99);
    meta["first_round_p_0.99"] = r99 ? Json(*r99) : Json(nullptr);
    if (cfg.method == Method::monte_carlo) {
      meta["trajectories"] = cfg.trajectories;
      meta["stuck"] = run.stuck;
      meta["not_reached"] = run.not_reached;
    }
    t.metadata = std::move(meta);
    return t;
  }

  const GueEnsemble ens = run_gue_ensemble(cfg.gue_dim, cfg.hamiltonians, cfg.granularity, cfg.protocol, cfg.method,
                                           cfg.r_max, cfg.trajectories, cfg.seed, cfg.workers);
  ResultTable t = curve_table(ens.mean_curve, static_cast<double>(cfg.gue_dim));
  std::vector<double> p_star_means;
  for (const auto& r : ens.runs) p_star_means.push_back(mean_of(r.p_star));
  meta["dimension"] = cfg.gue_dim;
  meta["hamiltonians_accepted"] = ens.accepted;
  meta["hamiltonians_rejected"] = ens.rejected;
  meta["mean_p_star"] = rounded(mean_of(p_star_means));
  meta["mean_p_star_stderr"] = rounded(stderr_of(p_star_means));
  meta["d_eff_over_d_mean"] = rounded(mean_of(ens.d_eff_over_d));
  meta["d_eff_over_d_stderr"] = rounded(stderr_of(ens.d_eff_over_d));
  const auto fit = mean_effective_dimension(ens.mean_curve);
  meta["d_eff_over_d_ensemble_curve"] = fit ? rounded(*fit / static_cast<double>(cfg.gue_dim)) : Json(nullptr);
  meta["d_eff_window"] = "r in [2, 20]";
  t.metadata = std::move(meta);
  return t;
}

ResultTable run_mum_experiment(const ExperimentConfig& cfg) {
  Index d = cfg.gue_dim;
  CMatrix basis;
  std::optional<StateVector> init;
  if (cfg.system == SystemKind::bose_hubbard) {
    const BoseHubbardSystem sys = make_bose_hubbard_system(cfg.bose_hubbard);
    d = sys.basis.dim();
    if (cfg.method == Method::monte_carlo) {
      const Index k = cfg.target == TargetKind::fock ? sys.basis.index_of(cfg.fock_target) : 0;
      basis = CMatrix::Identity(d, d);
      basis.col(0).swap(basis.col(k));
      init = sys.ground;
    }
  } else if (cfg.method == Method::monte_carlo) {
    basis = CMatrix::Identity(d, d);
    init = StateVector::basis_state(d, 1);
  }
  SuccessCurve c;
  if (cfg.method == Method::exact) {
    for (int r = 1; r <= cfg.r_max; ++r) {
      c.p.push_back(mum_success_probability(r, static_cast<double>(d)));
      c.stderr_p.push_back(0.0);
    }
  } else {
    c = mum_monte_carlo(basis, *init, cfg.r_max, cfg.trajectories, cfg.seed, cfg.workers);
  }
  ResultTable t = curve_table(c, static_cast<double>(d));
  Json meta = base_metadata(cfg);
  meta["dimension"] = d;
  t.metadata = std::move(meta);
  return t;
}

ResultTable run_medo_experiment(const ExperimentConfig& cfg) {
  std::vector<double> thetas;
  Json meta = base_metadata(cfg);
  if (cfg.system == SystemKind::bose_hubbard) {
    const BoseHubbardSystem sys = make_bose_hubbard_system(cfg.bose_hubbard);
    thetas.push_back(medo_angle(sys.ground, target_state(cfg, sys.basis)));
  } else {
    std::size_t rejected = 0;
    const Index d = cfg.gue_dim;
    thetas = for_accepted_gue(d, cfg.hamiltonians, cfg.seed, cfg.workers, rejected,
                              [&](std::uint64_t, const SpectralDecomposition& spec) {
                                return medo_angle(ground_state(spec), StateVector::basis_state(d, 0));
                              });
    meta["hamiltonians_accepted"] = thetas.size();
    meta["hamiltonians_rejected"] = rejected;
  }
  const SuccessCurve c = cfg.method == Method::exact
                             ? medo_exact(thetas, cfg.r_max)
                             : medo_monte_carlo(thetas, cfg.r_max, cfg.trajectories, cfg.seed, cfg.workers);
  ResultTable t = curve_table(c, std::nullopt);
  meta["mean_theta"] = rounded(mean_of(thetas));
  t.metadata = std::move(meta);
  return t;
}

ResultTable run_bangbang_experiment(const ExperimentConfig& cfg) {
  const BoseHubbardSystem sys = make_bose_hubbard_system(cfg.bose_hubbard);
  const BoseHubbardParams p1{0.0, 1.0, cfg.bose_hubbard.L, cfg.bose_hubbard.N};
  const BoseHubbardParams p2{1.0, 0.01, cfg.bose_hubbard.L, cfg.bose_hubbard.N};
  const SpectralDecomposition h1 = eigendecompose(build_bose_hubbard(sys.basis, p1));
  const SpectralDecomposition h2 = eigendecompose(build_bose_hubbard(sys.basis, p2));
  ProtocolConfig pc = cfg.protocol;
  pc.workers = cfg.workers;
  const BangBangResult res = run_bang_bang(h1, h2, sys.ground, target_state(cfg, sys.basis), cfg.r_max, pc);

  ResultTable t;
  t.columns = {"r", "fidelity", "one_minus_p", "t1", "t2"};
  for (std::size_t r = 0; r < res.fidelity.size(); ++r) {
    Cell t1 = std::string();
    Cell t2 = std::string();
    if (r > 0) {
      t1 = res.durations[r - 1].first;
      t2 = res.durations[r - 1].second;
    }
    t.add_row({static_cast<std::int64_t>(r), res.fidelity[r], 1.0 - res.fidelity[r], t1, t2});
  }
  Json meta = base_metadata(cfg);
  meta["h1"] = "J = 0, U = 1";
  meta["h2"] = "J = 1, U = 0.01";
  meta["commutator_norm"] = rounded(res.commutator_norm);
  meta["commuting"] = res.commuting;
  t.metadata = std::move(meta);
  return t;
}

ResultTable run_macroscopicity_experiment(const ExperimentConfig& cfg) {
  const BoseHubbardSystem sys = make_bose_hubbard_system(cfg.bose_hubbard);
  const MacroscopicityResult m = macroscopicity(sys.ground, sys.basis);
  const auto z = z_value_probabilities(sys.ground, sys.basis);
  const auto top = z.rbegin();
  ResultTable t;
  t.columns = {"J", "U", "n_eff", "fisher", "argmax_w", "z_max", "p_z_max"};
  t.add_row({cfg.bose_hubbard.J, cfg.bose_hubbard.U, m.n_eff, m.fisher, sign_string(m.argmax_w), top->first.str(),
             top->second});
  Json meta = base_metadata(cfg);
  meta["state"] = "ground state";
  t.metadata = std::move(meta);
  return t;
}

ResultTable run_table1_experiment(const ExperimentConfig& cfg) {
  const FockBasis basis(cfg.bose_hubbard.N, cfg.bose_hubbard.L);
  std::vector<std::optional<HalfInteger>> subspaces{std::nullopt};
  for (const auto& z : parity_values(basis)) subspaces.emplace_back(z);
  ResultTable t;
  t.columns = {"subspace", "dim", "mean", "stderr", "n_samples"};
  for (std::size_t i = 0; i < subspaces.size(); ++i) {
    const auto& z = subspaces[i];
    const SampleMean m = mean_macroscopicity(basis, z, cfg.trajectories, derive_seed(cfg.seed, i, streams::kHaar),
                                             cfg.workers);
    t.add_row({z ? "Z=" + z->str() : std::string("full"), static_cast<std::int64_t>(z_subspace_basis(basis, z).cols()),
               m.mean, m.stderr_mean, static_cast<std::int64_t>(m.n)});
  }
  Json meta = base_metadata(cfg);
  meta["sampling"] = "Haar-uniform on each subspace sphere";
  t.metadata = std::move(meta);
  return t;
}

ResultTable run_reachability_experiment(const ExperimentConfig& cfg) {
  std::optional<HermitianOperator> h;
  std::optional<MeasurementScheme> scheme;
  if (cfg.system == SystemKind::bose_hubbard) {
    const BoseHubbardSystem sys = make_bose_hubbard_system(cfg.bose_hubbard);
    h = sys.hamiltonian;
    scheme = make_bose_hubbard_scheme(sys.basis, cfg.granularity, cfg.fock_target, cfg.z_target);
  } else {
    Rng rng = make_rng(cfg.seed, 0, streams::kHamiltonian);
    h = sample_gue(cfg.gue_dim, rng);
    scheme = make_gue_scheme(cfg.gue_dim, cfg.granularity);
  }
  ReachabilityOptions opt;
  opt.sample_seed = derive_seed(cfg.seed, 0, streams::kSubsets);
  const ReachabilityReport rep = check_reachability(*h, *scheme, opt);
  ResultTable t;
  t.columns = {"reachable", "mode", "failure_outcomes", "subsets_checked", "violations", "first_violation"};
  std::string first;
  if (!rep.violations.empty()) {
    for (Index i : rep.violations.front().outcomes) first += (first.empty() ? "" : " ") + scheme->label(i);
  }
  t.add_row({std::int64_t{rep.reachable ? 1 : 0}, std::string(rep.exhaustive ? "exhaustive" : "sampled"),
             static_cast<std::int64_t>(scheme->failure_count()), static_cast<std::int64_t>(rep.subsets_checked),
             static_cast<std::int64_t>(rep.violation_count), first});
  t.metadata = base_metadata(cfg);
  return t;
}

}  // namespace

BoseHubbardSystem make_bose_hubbard_system(const BoseHubbardParams& p) {
  p.validate();
  FockBasis basis(p.N, p.L);
  HermitianOperator h = build_bose_hubbard(basis, p);
  SpectralDecomposition spec = eigendecompose(h);
  StateVector ground = ground_state(spec);
  return BoseHubbardSystem{std::move(basis), std::move(h), std::move(spec), std::move(ground)};
}

MeasurementScheme make_bose_hubbard_scheme(const FockBasis& basis, Granularity g, const Occupation& fock_target,
                                           HalfInteger z_target) {
  switch (g) {
    case Granularity::granular:
      return build_granular_scheme(basis, fock_target);
    case Granularity::binary:
      return build_binary_scheme(HermitianOperator::projector(basis.fock_state(fock_target)));
    case Granularity::subspace:
      return build_subspace_scheme(basis, fock_target);
    case Granularity::parity:
      return build_parity_imbalance_scheme(basis, z_target);
  }
  throw ValidationError("unknown granularity");
}

MeasurementScheme make_gue_scheme(Index d, Granularity g) {
  switch (g) {
    case Granularity::granular:
      return build_computational_scheme(d, 0);
    case Granularity::binary:
      return build_binary_scheme(HermitianOperator::projector(StateVector::basis_state(d, 0)));
    default:
      throw ValidationError("GUE experiments support granular and binary measurements only");
  }
}

FumesRun run_fumes(const SpectralDecomposition& spec, const StateVector& init, const MeasurementScheme& scheme,
                   const ProtocolConfig& cfg, Method method, int r_max, std::size_t trajectories, std::uint64_t seed,
                   int workers) {
  FumesRun run;
  if (method == Method::exact) {
    ProtocolConfig pc = cfg;
    pc.workers = workers;
    FumesCurveResult res = scheme.failure_count() == 1 ? fumes_failure_path_exact(spec, init, scheme, pc, r_max)
                                                       : fumes_markov_exact(spec, init, scheme, pc, r_max);
    run.curve = std::move(res.curve);
    run.mean_wait = res.mean_wait;
    run.p_star = std::move(res.p_star);
    return run;
  }

  ProtocolConfig pc = single_threaded(cfg);
  pc.max_rounds = r_max;
  const FumesSimulator sim(spec, scheme, pc);
  const auto records = kernels::parallel_map(trajectories, workers, [&](std::size_t i) {
    return sim.run(init, derive_seed(seed, i, streams::kTrajectory));
  });
  run.curve = aggregate_success(records, r_max);
  run.curve.metadata["protocol"] = "fumes";
  run.curve.metadata["method"] = "monte_carlo";
  double wait_sum = 0.0;
  std::size_t steps = 0;
  for (const auto& rec : records) {
    for (const auto& s : rec.steps) {
      wait_sum += s.wait_time;
      run.p_star.push_back(s.success_probability);
      ++steps;
    }
    if (rec.status == TrajectoryStatus::stuck) ++run.stuck;
    if (rec.status == TrajectoryStatus::not_reached) ++run.not_reached;
  }
  run.mean_wait = steps ? wait_sum / static_cast<double>(steps) : 0.0;
  return run;
}

GueEnsemble run_gue_ensemble(Index d, std::size_t n_hamiltonians, Granularity g, const ProtocolConfig& cfg,
                             Method method, int r_max, std::size_t trajectories_per_hamiltonian, std::uint64_t seed,
                             int workers) {
  if (n_hamiltonians < 1) throw ValidationError("run_gue_ensemble: need at least one Hamiltonian");
  const MeasurementScheme scheme = make_gue_scheme(d, g);
  const ProtocolConfig pc = single_threaded(cfg);
  struct Item {
    FumesRun run;
    double theta;
  };
  GueEnsemble ens;
  ens.d = d;
  auto items = for_accepted_gue(d, n_hamiltonians, seed, workers, ens.rejected,
                                [&](std::uint64_t attempt, const SpectralDecomposition& spec) {
                                  const StateVector init = ground_state(spec);
                                  return Item{run_fumes(spec, init, scheme, pc, method, r_max,
                                                        trajectories_per_hamiltonian,
                                                        derive_seed(seed, attempt, streams::kTrajectory), 1),
                                              medo_angle(init, StateVector::basis_state(d, 0))};
                                });
  ens.accepted = items.size();
  for (auto& it : items) {
    if (const auto de = mean_effective_dimension(it.run.curve)) ens.d_eff_over_d.push_back(*de / static_cast<double>(d));
    ens.medo_theta.push_back(it.theta);
    ens.runs.push_back(std::move(it.run));
  }
  SuccessCurve& mc = ens.mean_curve;
  mc.n_trajectories = ens.accepted;
  mc.metadata["protocol"] = "fumes";
  mc.metadata["aggregate"] = "mean over Hamiltonians";
  for (int r = 1; r <= r_max; ++r) {
    std::vector<double> col;
    col.reserve(ens.runs.size());
    for (const auto& run : ens.runs) col.push_back(run.curve.at(r));
    mc.p.push_back(mean_of(col));
    mc.stderr_p.push_back(stderr_of(col));
  }
  return ens;
}

double pathology_rejection_rate(Index d, std::size_t samples, std::uint64_t seed, int workers) {
  if (samples < 1) throw ValidationError("pathology_rejection_rate: need at least one sample");
  const auto flags = kernels::parallel_map(samples, workers, [&](std::size_t i) {
    return accept_gue(d, seed, i) ? 0 : 1;
  });
  double k = 0.0;
  for (int f : flags) k += f;
  return k / static_cast<double>(samples);
}

ResultTable run_experiment(const ExperimentConfig& cfg) {
  switch (cfg.kind) {
    case ExperimentKind::fumes:
      return run_fumes_experiment(cfg);
    case ExperimentKind::mum:
      return run_mum_experiment(cfg);
    case ExperimentKind::medo:
      return run_medo_experiment(cfg);
    case ExperimentKind::bangbang:
      return run_bangbang_experiment(cfg);
    case ExperimentKind::macroscopicity:
      return run_macroscopicity_experiment(cfg);
    case ExperimentKind::table1:
      return run_table1_experiment(cfg);
    case ExperimentKind::reachability:
      return run_reachability_experiment(cfg);
  }
  throw ValidationError("unknown experiment kind");
}

}  // namespace fumes
