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
#include <numbers>

#include "fumes/errors.hpp"
#include "fumes/protocols.hpp"

namespace fumes {

double medo_angle(const StateVector& init, const StateVector& target) {
  return std::acos(std::min(1.0, std::abs(overlap(target, init))));
}

double medo_success_probability(double theta, int r) {
  if (r < 1) throw ValidationError("medo_success_probability: r must be >= 1");
  if (theta == 0.0) return 1.0;
  return std::pow(std::cos(theta / r), 2.0 * r);
}

double mnedo_success_probability(const std::vector<double>& angles) {
  double p = 1.0;
  for (double v : angles) {
    if (v < 0.0) throw ValidationError("mnedo_success_probability: angles must be nonnegative");
    const double c = std::cos(v);
    p *= c * c;
  }
  return p;
}

bool run_medo_sequence(const StateVector& init, const StateVector& target, int r, Rng& rng) {
  if (r < 1) throw ValidationError("run_medo_sequence: r must be >= 1");
  if (init.dim() != target.dim()) throw ValidationError("run_medo_sequence: dimension mismatch");
  const double theta = medo_angle(init, target);
  if (theta < 1e-15) return true;

  // Orthonormal frame of span{target, init}; the phase of init relative to
  // target is absorbed into the interpolating states.
  const Complex c = overlap(target, init);
  const Complex ph = std::abs(c) > 0.0 ? c / std::abs(c) : Complex(1.0, 0.0);
  const CVector t = ph * target.amplitudes();
  const CVector u = (init.amplitudes() - c * target.amplitudes()).normalized();

  StateVector state = init;
  for (int j = 1; j <= r; ++j) {
    const double a = theta - j * theta / r;
    const StateVector phi = StateVector::normalized(std::cos(a) * t + std::sin(a) * u);
    const double p = std::norm(overlap(phi, state));
    if (uniform01(rng) >= p) return false;
    state = phi;
  }
  return true;
}

double mum_success_probability(int r, double d) {
  if (r < 0) throw ValidationError("mum_success_probability: r must be >= 0");
  if (!(d >= 1.0)) throw ValidationError("mum_success_probability: d must be >= 1");
  return 1.0 - std::pow(1.0 - 1.0 / d, r);
}

CMatrix dft_unbiased_basis(const CMatrix& basis) {
  const Index d = basis.rows();
  if (basis.cols() != d) throw ValidationError("dft_unbiased_basis: basis must be square");
  CMatrix f(d, d);
  const double norm = 1.0 / std::sqrt(static_cast<double>(d));
  for (Index j = 0; j < d; ++j) {
    for (Index k = 0; k < d; ++k) {
      // reduce jk mod d before scaling so large products keep full precision
      const auto jk = static_cast<double>((j * k) % d);
      f(k, j) = std::polar(norm, 2.0 * std::numbers::pi * jk / static_cast<double>(d));
    }
  }
  return basis * f;
}

TrajectoryRecord run_mum_trajectory(const CMatrix& target_basis, const StateVector& init, int max_rounds,
                                    std::uint64_t seed) {
  const Index d = target_basis.rows();
  if (target_basis.cols() != d || init.dim() != d) throw ValidationError("run_mum_trajectory: dimension mismatch");
  if ((target_basis.adjoint() * target_basis - CMatrix::Identity(d, d)).cwiseAbs().maxCoeff() > 1e-9) {
    throw ValidationError("run_mum_trajectory: basis is not orthonormal");
  }
  if (max_rounds < 1) throw ValidationError("run_mum_trajectory: max_rounds must be >= 1");

  TrajectoryRecord rec;
  rec.seed = seed;
  if (d == 1) {
    rec.steps.push_back(TrajectoryStep{0.0, 0, 1.0});
    rec.success_round = 1;
    rec.status = TrajectoryStatus::success;
    return rec;
  }

  Rng rng(seed);
  const CMatrix mub = dft_unbiased_basis(target_basis);
  const CVector target = target_basis.col(0);
  CVector state = init.amplitudes();
  for (int round = 1; round <= max_rounds; ++round) {
    // unbiased-basis measurement
    const RVector probs = (mub.adjoint() * state).cwiseAbs2();
    const double u = uniform01(rng) * probs.sum();
    double acc = 0.0;
    Index j = d - 1;
    for (Index k = 0; k < d; ++k) {
      acc += probs[k];
      if (u < acc) {
        j = k;
        break;
      }
    }
    state = mub.col(j);
    // target measurement
    const double p = std::norm(target.dot(state));
    const bool success = uniform01(rng) < p;
    rec.steps.push_back(TrajectoryStep{0.0, success ? 0 : 1, p});
    if (success) {
      rec.success_round = round;
      rec.status = TrajectoryStatus::success;
      return rec;
    }
    state = (state - target * target.dot(state)).normalized();
  }
  rec.status = TrajectoryStatus::not_reached;
  return rec;
}

BangBangResult run_bang_bang(const SpectralDecomposition& h1, const SpectralDecomposition& h2,
                             const StateVector& init, const StateVector& target, int cycles,
                             const ProtocolConfig& cfg) {
  const Index d = h1.dim();
  if (h2.dim() != d || init.dim() != d || target.dim() != d) throw ValidationError("run_bang_bang: dimension mismatch");
  if (cycles < 0) throw ValidationError("run_bang_bang: cycles must be >= 0");

  BangBangResult res;
  const CMatrix m1 = h1.reconstruct();
  const CMatrix m2 = h2.reconstruct();
  res.commutator_norm = (m1 * m2 - m2 * m1).norm();
  res.commuting = res.commutator_norm < 1e-9;

  const WaitTimeOptimizer opt1(h1, cfg);
  const WaitTimeOptimizer opt2(h2, cfg);
  const CMatrix target_col = target.amplitudes();
  const CMatrix rows2 = opt2.target_rows(target_col);

  StateVector state = init;
  res.fidelity.push_back(std::norm(overlap(target, state)));
  for (int c = 0; c < cycles; ++c) {
    const CVector c1 = h1.to_eigenbasis(state);
    double t1 = 0.0;
    double t2 = 0.0;
    double best = res.fidelity.back();
    for (int sweep = 0; sweep < cfg.bang_bang_sweeps; ++sweep) {
      // t1 with t2 fixed: the target is pulled back through exp(-i H2 t2)
      const StateVector pulled = evolve(h2, target, -t2);
      const WaitTime w1 = opt1.optimize(c1, opt1.target_rows(CMatrix(pulled.amplitudes())));
      if (w1.p > best) {
        best = w1.p;
        t1 = w1.t;
      }
      // t2 with t1 fixed
      const StateVector mid = evolve(h1, state, t1);
      const WaitTime w2 = opt2.optimize(h2.to_eigenbasis(mid), rows2);
      if (w2.p > best) {
        best = w2.p;
        t2 = w2.t;
      }
    }
    state = evolve(h2, evolve(h1, state, t1), t2);
    res.durations.emplace_back(t1, t2);
    res.fidelity.push_back(std::norm(overlap(target, state)));
  }
  return res;
}

}  // namespace fumes
