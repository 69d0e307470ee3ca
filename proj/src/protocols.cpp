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


#include <algorithm>
#include <cmath>
#include <string>

#include "fumes/errors.hpp"
#include "fumes/protocols.hpp"

namespace fumes {

std::optional<int> SuccessCurve::first_round_reaching(double level) const {
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] >= level) return static_cast<int>(i + 1);
  }
  return std::nullopt;
}

namespace {

bool is_stuck(const WaitTime& w, const ProtocolConfig& cfg) { return w.stationary && w.p <= cfg.rel_tol; }

/// exp(-i E t) applied to eigenbasis coefficients.
CVector phase(const RVector& energies, const CVector& coeffs, double t) {
  CVector out(coeffs.size());
  for (Index k = 0; k < coeffs.size(); ++k) out[k] = coeffs[k] * std::polar(1.0, -energies[k] * t);
  return out;
}

/// Populations |<phi_i| U(t) |s>|^2 averaged over t uniform on [0, T], for
/// rows = Phi^dagger V and eigenbasis coefficients c of s. Uses
///   E_t e^{-i w t} = (1 - e^{-i w T}) / (i w T).
RVector random_wait_populations(const RVector& energies, const CMatrix& rows, const CVector& coeffs, double t_max) {
  const Index d = energies.size();
  CMatrix f(d, d);
  for (Index k = 0; k < d; ++k) {
    for (Index l = 0; l < d; ++l) {
      const double w = energies[k] - energies[l];
      const double x = w * t_max;
      f(k, l) = std::abs(x) < 1e-12 ? Complex(1.0, 0.0) : (Complex(1.0, 0.0) - std::polar(1.0, -x)) / Complex(0.0, x);
    }
  }
  const CMatrix a = rows * coeffs.asDiagonal();
  return ((a * f).cwiseProduct(a.conjugate())).rowwise().sum().real();
}

std::vector<Index> failure_outcomes_of(const MeasurementScheme& scheme) {
  std::vector<Index> out;
  for (Index i = 0; i < scheme.outcome_count(); ++i) {
    if (i != scheme.target_index()) out.push_back(i);
  }
  return out;
}

void require_granular(const MeasurementScheme& scheme, const char* who) {
  if (!scheme.failures_rank_one()) {
    throw ValidationError(std::string(who) + ": scheme must be granular (every failure projector rank 1)");
  }
}

/// Rows of Phi_f^dagger for all failure columns, in failure-outcome order.
CMatrix failure_columns(const MeasurementScheme& scheme, const std::vector<Index>& failures) {
  CMatrix out(scheme.dim(), static_cast<Index>(failures.size()));
  for (std::size_t m = 0; m < failures.size(); ++m) out.col(static_cast<Index>(m)) = scheme.basis(failures[m]).col(0);
  return out;
}

MarkovKernel markov_kernel(const SpectralDecomposition& spec, const MeasurementScheme& scheme,
                           const WaitTimeOptimizer& opt) {
  const ProtocolConfig& cfg = opt.config();
  MarkovKernel kern;
  kern.failure_outcomes = failure_outcomes_of(scheme);
  const auto m = static_cast<Index>(kern.failure_outcomes.size());
  const CMatrix fail = failure_columns(scheme, kern.failure_outcomes);
  const CMatrix& v = spec.eigenvectors();
  const CMatrix target_rows = opt.target_rows(scheme.target_basis());
  const CMatrix fail_rows = fail.adjoint() * v;
  const CMatrix coeffs = v.adjoint() * fail;

  kern.transition = RMatrix::Zero(m, m);
  kern.success = RVector::Zero(m);
  if (cfg.wait_policy == WaitPolicy::uniform_random) {
    for (Index j = 0; j < m; ++j) {
      kern.transition.col(j) = random_wait_populations(spec.eigenvalues(), fail_rows, coeffs.col(j), opt.t_max());
      kern.success[j] = random_wait_populations(spec.eigenvalues(), target_rows, coeffs.col(j), opt.t_max()).sum();
    }
    return kern;
  }

  kern.waits = opt.optimize_batch(coeffs, target_rows);
  CMatrix evolved(coeffs.rows(), m);
  for (Index j = 0; j < m; ++j) {
    const WaitTime& w = kern.waits[static_cast<std::size_t>(j)];
    evolved.col(j) = is_stuck(w, cfg) ? CVector::Zero(coeffs.rows()) : phase(spec.eigenvalues(), coeffs.col(j), w.t);
  }
  kern.transition = (fail_rows * evolved).cwiseAbs2();
  kern.success = (target_rows * evolved).cwiseAbs2().colwise().sum().transpose();
  return kern;
}

SuccessCurve exact_curve(std::vector<double> p, const std::string& method, const ProtocolConfig& cfg) {
  SuccessCurve c;
  c.stderr_p.assign(p.size(), 0.0);
  c.p = std::move(p);
  c.metadata["protocol"] = "fumes";
  c.metadata["method"] = method;
  c.metadata["wait_policy"] = cfg.wait_policy == WaitPolicy::optimized ? "optimized" : "uniform_random";
  return c;
}

}  // namespace

FumesSimulator::FumesSimulator(const SpectralDecomposition& spec, const MeasurementScheme& scheme,
                               const ProtocolConfig& cfg)
    : spec_(spec), scheme_(scheme), optimizer_(spec, cfg), rows_(optimizer_.target_rows(scheme.target_basis())) {
  if (scheme.dim() != spec.dim()) throw ValidationError("FumesSimulator: scheme and Hamiltonian dimensions differ");
}

TrajectoryRecord FumesSimulator::run(const StateVector& init, std::uint64_t seed) const {
  if (init.dim() != spec_.dim()) throw ValidationError("run_fumes_trajectory: initial state dimension mismatch");
  const ProtocolConfig& cfg = optimizer_.config();
  Rng rng(seed);
  TrajectoryRecord rec;
  rec.seed = seed;
  StateVector state = init;
  for (int round = 1; round <= cfg.max_rounds; ++round) {
    const CVector coeffs = spec_.to_eigenbasis(state);
    WaitTime w;
    if (cfg.wait_policy == WaitPolicy::uniform_random) {
      w.t = optimizer_.t_max() * (1.0 - uniform01(rng));
      w.p = optimizer_.population(coeffs, rows_, w.t);
    } else {
      w = optimizer_.optimize(coeffs, rows_);
      if (is_stuck(w, cfg)) {
        rec.status = TrajectoryStatus::stuck;
        return rec;
      }
    }
    state = evolve(spec_, state, w.t);
    const MeasurementOutcome out = measure(state, scheme_, rng);
    rec.steps.push_back(TrajectoryStep{w.t, out.outcome_index, w.p});
    if (out.success) {
      rec.success_round = round;
      rec.status = TrajectoryStatus::success;
      return rec;
    }
    state = out.collapsed;
  }
  rec.status = TrajectoryStatus::not_reached;
  return rec;
}

TrajectoryRecord run_fumes_trajectory(const SpectralDecomposition& spec, const StateVector& init,
                                      const MeasurementScheme& scheme, const ProtocolConfig& cfg,
                                      std::uint64_t seed) {
  return FumesSimulator(spec, scheme, cfg).run(init, seed);
}

MarkovKernel build_markov_kernel(const SpectralDecomposition& spec, const MeasurementScheme& scheme,
                                 const ProtocolConfig& cfg) {
  require_granular(scheme, "build_markov_kernel");
  const WaitTimeOptimizer opt(spec, cfg);
  return markov_kernel(spec, scheme, opt);
}

FumesCurveResult fumes_markov_exact(const SpectralDecomposition& spec, const StateVector& init,
                                    const MeasurementScheme& scheme, const ProtocolConfig& cfg, int r_max) {
  require_granular(scheme, "fumes_markov_exact");
  if (r_max < 1) throw ValidationError("fumes_markov_exact: r_max must be >= 1");
  if (init.dim() != spec.dim() || scheme.dim() != spec.dim()) throw ValidationError("fumes_markov_exact: dimension mismatch");

  const WaitTimeOptimizer opt(spec, cfg);
  const MarkovKernel kern = markov_kernel(spec, scheme, opt);
  const CMatrix target_rows = opt.target_rows(scheme.target_basis());
  const CMatrix fail_rows = failure_columns(scheme, kern.failure_outcomes).adjoint() * spec.eigenvectors();
  const CVector c0 = spec.to_eigenbasis(init);
  const bool random = cfg.wait_policy == WaitPolicy::uniform_random;

  FumesCurveResult res;
  RVector occupation;
  double p1 = 0.0;
  if (random) {
    res.first_wait = WaitTime{opt.t_max() / 2.0, 0.0, false};
    p1 = random_wait_populations(spec.eigenvalues(), target_rows, c0, opt.t_max()).sum();
    occupation = random_wait_populations(spec.eigenvalues(), fail_rows, c0, opt.t_max());
  } else {
    res.first_wait = opt.optimize(c0, target_rows);
    if (is_stuck(res.first_wait, cfg)) {
      res.curve = exact_curve(std::vector<double>(static_cast<std::size_t>(r_max), 0.0), "markov_exact", cfg);
      res.mean_wait = res.first_wait.t;
      return res;
    }
    const CVector evolved = phase(spec.eigenvalues(), c0, res.first_wait.t);
    p1 = (target_rows * evolved).squaredNorm();
    occupation = (fail_rows * evolved).cwiseAbs2();
  }
  res.first_wait.p = p1;

  std::vector<double> p(static_cast<std::size_t>(r_max));
  p[0] = std::min(1.0, p1);
  double wait_sum = res.first_wait.t;
  double measurements = 1.0;
  RVector tau = RVector::Constant(occupation.size(), opt.t_max() / 2.0);
  if (!random) {
    for (std::size_t m = 0; m < kern.waits.size(); ++m) tau[static_cast<Index>(m)] = kern.waits[m].t;
  }
  for (int r = 2; r <= r_max; ++r) {
    wait_sum += occupation.dot(tau);
    measurements += occupation.sum();
    const double gained = kern.success.dot(occupation);
    p[static_cast<std::size_t>(r - 1)] = std::min(1.0, p[static_cast<std::size_t>(r - 2)] + gained);
    occupation = kern.transition * occupation;
  }
  res.mean_wait = wait_sum / measurements;
  if (random) {
    res.p_star.assign(kern.success.data(), kern.success.data() + kern.success.size());
  } else {
    for (const auto& w : kern.waits) res.p_star.push_back(w.p);
  }
  res.curve = exact_curve(std::move(p), "markov_exact", cfg);
  return res;
}

FumesCurveResult fumes_failure_path_exact(const SpectralDecomposition& spec, const StateVector& init,
                                          const MeasurementScheme& scheme, const ProtocolConfig& cfg, int r_max) {
  if (scheme.failure_count() != 1) throw ValidationError("fumes_failure_path_exact: scheme must have one failure outcome");
  if (cfg.wait_policy != WaitPolicy::optimized) {
    throw ValidationError("fumes_failure_path_exact: only the optimized wait policy is deterministic");
  }
  if (r_max < 1) throw ValidationError("fumes_failure_path_exact: r_max must be >= 1");
  if (init.dim() != spec.dim() || scheme.dim() != spec.dim()) {
    throw ValidationError("fumes_failure_path_exact: dimension mismatch");
  }

  const WaitTimeOptimizer opt(spec, cfg);
  const CMatrix rows = opt.target_rows(scheme.target_basis());
  const Index failure = scheme.target_index() == 0 ? 1 : 0;

  FumesCurveResult res;
  std::vector<double> p(static_cast<std::size_t>(r_max), 0.0);
  double survival = 1.0;
  double wait_sum = 0.0;
  double measurements = 0.0;
  StateVector state = init;
  int r = 1;
  for (; r <= r_max; ++r) {
    const WaitTime w = opt.optimize(spec.to_eigenbasis(state), rows);
    if (r == 1) res.first_wait = w;
    if (is_stuck(w, cfg)) break;
    state = evolve(spec, state, w.t);
    const double pr = std::clamp(outcome_probabilities(state, scheme)[static_cast<std::size_t>(scheme.target_index())], 0.0, 1.0);
    res.p_star.push_back(pr);
    wait_sum += survival * w.t;
    measurements += survival;
    survival *= 1.0 - pr;
    p[static_cast<std::size_t>(r - 1)] = 1.0 - survival;
    if (1.0 - pr <= 1e-14) {
      survival = 0.0;
      break;
    }
    state = collapse(state, scheme, failure);
  }
  for (int k = r; k <= r_max; ++k) p[static_cast<std::size_t>(k - 1)] = 1.0 - survival;
  res.mean_wait = measurements > 0.0 ? wait_sum / measurements : 0.0;
  res.curve = exact_curve(std::move(p), "failure_path_exact", cfg);
  return res;
}

}  // namespace fumes
