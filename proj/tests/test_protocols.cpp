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


#include <cmath>
#include <numbers>

#include "doctest.h"
#include "fumes/analysis.hpp"
#include "fumes/errors.hpp"
#include "fumes/hamiltonians.hpp"
#include "fumes/kernels.hpp"
#include "fumes/protocols.hpp"

using namespace fumes;

namespace {

constexpr double kPi = std::numbers::pi;

SpectralDecomposition rabi(double j) {
  CMatrix h(2, 2);
  h << 0.0, -j, -j, 0.0;
  return eigendecompose(HermitianOperator(h));
}

SpectralDecomposition diag_spec(std::initializer_list<double> values) {
  RVector e(static_cast<Index>(values.size()));
  Index k = 0;
  for (double v : values) e[k++] = v;
  return eigendecompose(HermitianOperator::diagonal(e));
}

struct SmallLattice {
  FockBasis basis = enumerate_fock_basis(3, 3);
  SpectralDecomposition spec = eigendecompose(build_bose_hubbard(basis, BoseHubbardParams{1.0, 1.0, 3, 3}));
  StateVector ground = ground_state(spec);
};

SuccessCurve monte_carlo(const SpectralDecomposition& spec, const StateVector& init, const MeasurementScheme& scheme,
                         const ProtocolConfig& cfg, int n, int r_max) {
  const FumesSimulator sim(spec, scheme, cfg);
  const auto records = kernels::parallel_map(static_cast<std::size_t>(n), 8, [&](std::size_t i) {
    return sim.run(init, derive_seed(99, i, 2));
  });
  return aggregate_success(records, r_max);
}

void check_within_4_sigma(const SuccessCurve& exact, const SuccessCurve& mc, int n) {
  for (int r = 1; r <= exact.r_max(); ++r) {
    const double p = exact.at(r);
    const double sigma = std::sqrt(std::max(p * (1.0 - p), 1e-4) / n);
    CHECK(std::abs(mc.at(r) - p) < 4.0 * sigma);
  }
}

}  // namespace

TEST_CASE("config validation") {
  ProtocolConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.grid_points = 1;
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
  cfg = ProtocolConfig{};
  cfg.rel_tol = -1.0;
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
}

TEST_CASE("Rabi wait time is pi / 2J") {
  for (double j : {1.0, 0.3}) {
    const auto spec = rabi(j);
    const auto w = optimal_wait_time(spec, StateVector::basis_state(2, 0),
                                     HermitianOperator::projector(StateVector::basis_state(2, 1)), ProtocolConfig{});
    CHECK(w.t == doctest::Approx(kPi / (2.0 * j)).epsilon(1e-7));
    CHECK(w.p == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_FALSE(w.stationary);
  }
}

TEST_CASE("wait time beats every grid point") {
  SmallLattice s;
  const auto scheme = build_granular_scheme(s.basis, Occupation{1, 1, 1});
  const WaitTimeOptimizer opt(s.spec, ProtocolConfig{});
  const CMatrix rows = opt.target_rows(scheme.target_basis());
  const CVector c = s.spec.to_eigenbasis(s.ground);
  const auto w = opt.optimize(c, rows);
  CHECK(w.t > 0.0);
  CHECK(w.t <= opt.t_max());
  CHECK(std::abs(w.p - std::norm(overlap(s.basis.fock_state({1, 1, 1}), evolve(s.spec, s.ground, w.t)))) < 1e-12);
  for (double t : opt.grid()) CHECK(opt.population(c, rows, t) <= w.p + 1e-12);
}

TEST_CASE("stationary populations") {
  const auto spec = diag_spec({0.0, 1.0, 2.5});
  ProtocolConfig cfg;
  const auto inside = optimal_wait_time(spec, StateVector::basis_state(3, 0),
                                        HermitianOperator::projector(StateVector::basis_state(3, 0)), cfg);
  CHECK(inside.stationary);
  CHECK(inside.p == doctest::Approx(1.0));
  const WaitTimeOptimizer opt(spec, cfg);
  CHECK(inside.t == opt.grid().front());

  const auto orth = optimal_wait_time(spec, StateVector::basis_state(3, 2),
                                      HermitianOperator::projector(StateVector::basis_state(3, 0)), cfg);
  CHECK(orth.stationary);
  CHECK(orth.p == doctest::Approx(0.0));
}

TEST_CASE("optimal_wait_time input checks") {
  const auto spec = rabi(1.0);
  CHECK_THROWS_AS(optimal_wait_time(spec, StateVector::basis_state(3, 0),
                                    HermitianOperator::projector(StateVector::basis_state(2, 1)), ProtocolConfig{}),
                  ValidationError);
  CHECK_THROWS_AS(optimal_wait_time(spec, StateVector::basis_state(2, 0), HermitianOperator::diagonal(RVector::Constant(2, 0.5)),
                                    ProtocolConfig{}),
                  ValidationError);
}

TEST_CASE("trajectories") {
  const auto spec = rabi(1.0);
  const auto scheme = build_computational_scheme(2, 1);
  const auto rec = run_fumes_trajectory(spec, StateVector::basis_state(2, 0), scheme, ProtocolConfig{}, 3);
  REQUIRE(rec.success_round.has_value());
  CHECK(*rec.success_round == 1);
  CHECK(rec.status == TrajectoryStatus::success);
  CHECK(rec.steps.size() == 1);
  CHECK(rec.seed == 3);

  const auto diag = diag_spec({0.0, 1.0, 2.5});
  const auto scheme3 = build_computational_scheme(3, 0);
  const ProtocolConfig cfg;
  const auto home = run_fumes_trajectory(diag, StateVector::basis_state(3, 0), scheme3, cfg, 1);
  CHECK(home.success_round == 1);
  CHECK(home.steps.at(0).wait_time == WaitTimeOptimizer(diag, cfg).grid().front());

  const auto stuck = run_fumes_trajectory(diag, StateVector::basis_state(3, 1), scheme3, cfg, 1);
  CHECK(stuck.status == TrajectoryStatus::stuck);
  CHECK_FALSE(stuck.success_round.has_value());
}

TEST_CASE("recorded success probability equals the Born probability") {
  SmallLattice s;
  const auto scheme = build_granular_scheme(s.basis, Occupation{1, 1, 1});
  ProtocolConfig cfg;
  cfg.max_rounds = 30;
  const auto rec = run_fumes_trajectory(s.spec, s.ground, scheme, cfg, 17);
  StateVector state = s.ground;
  const auto target = s.basis.fock_state({1, 1, 1});
  for (const auto& step : rec.steps) {
    CHECK(step.wait_time > 0.0);
    state = evolve(s.spec, state, step.wait_time);
    CHECK(std::abs(step.success_probability - std::norm(overlap(target, state))) < 1e-9);
    if (step.outcome_index != scheme.target_index()) state = collapse(state, scheme, step.outcome_index);
  }
}

TEST_CASE("Markov exact curve") {
  const auto two = fumes_markov_exact(rabi(1.0), StateVector::basis_state(2, 0), build_computational_scheme(2, 1),
                                      ProtocolConfig{}, 3);
  CHECK(two.curve.at(1) == doctest::Approx(1.0));
  CHECK(two.curve.at(3) == doctest::Approx(1.0));

  SmallLattice s;
  const auto sub = build_subspace_scheme(s.basis, Occupation{1, 1, 1});
  CHECK_THROWS_AS(fumes_markov_exact(s.spec, s.ground, sub, ProtocolConfig{}, 5), ValidationError);
}

TEST_CASE("Markov exact agrees with Monte Carlo on N = L = 3") {
  SmallLattice s;
  const auto scheme = build_granular_scheme(s.basis, Occupation{1, 1, 1});
  ProtocolConfig cfg;
  cfg.grid_points = 2048;
  cfg.max_rounds = 15;
  const auto exact = fumes_markov_exact(s.spec, s.ground, scheme, cfg, 15);
  for (int r = 2; r <= 15; ++r) CHECK(exact.curve.at(r) >= exact.curve.at(r - 1));
  const int n = 10000;
  check_within_4_sigma(exact.curve, monte_carlo(s.spec, s.ground, scheme, cfg, n, 15), n);
}

TEST_CASE("random-wait Markov curve agrees with Monte Carlo") {
  SmallLattice s;
  const auto scheme = build_granular_scheme(s.basis, Occupation{0, 3, 0});
  ProtocolConfig cfg;
  cfg.grid_points = 1024;
  cfg.max_rounds = 10;
  cfg.wait_policy = WaitPolicy::uniform_random;
  const auto exact = fumes_markov_exact(s.spec, s.ground, scheme, cfg, 10);
  const int n = 10000;
  check_within_4_sigma(exact.curve, monte_carlo(s.spec, s.ground, scheme, cfg, n, 10), n);
}

TEST_CASE("binary failure path agrees with Monte Carlo") {
  SmallLattice s;
  const auto scheme = build_binary_scheme(HermitianOperator::projector(s.basis.fock_state({1, 1, 1})));
  ProtocolConfig cfg;
  cfg.grid_points = 2048;
  cfg.max_rounds = 10;
  const auto exact = fumes_failure_path_exact(s.spec, s.ground, scheme, cfg, 10);
  double survive = 1.0;
  for (int r = 1; r <= 10 && r <= static_cast<int>(exact.p_star.size()); ++r) {
    survive *= 1.0 - exact.p_star[static_cast<std::size_t>(r - 1)];
    CHECK(std::abs(exact.curve.at(r) - (1.0 - survive)) < 1e-12);
  }
  const int n = 10000;
  check_within_4_sigma(exact.curve, monte_carlo(s.spec, s.ground, scheme, cfg, n, 10), n);
}

TEST_CASE("MEDO closed forms") {
  CHECK(medo_success_probability(kPi / 4.0, 1) == doctest::Approx(0.5));
  CHECK(medo_success_probability(kPi / 2.0, 10000) > 0.9997);
  CHECK(medo_success_probability(0.0, 3) == 1.0);
  CHECK_THROWS_AS(medo_success_probability(1.0, 0), ValidationError);

  CHECK(medo_angle(StateVector::basis_state(2, 0), StateVector::basis_state(2, 1)) == doctest::Approx(kPi / 2.0));

  Rng rng(6);
  for (int trial = 0; trial < 50; ++trial) {
    const double theta = 0.5 * kPi * uniform01(rng);
    const int r = 2 + trial % 7;
    std::vector<double> cuts{0.0, theta};
    for (int k = 0; k < r - 1; ++k) cuts.push_back(theta * uniform01(rng));
    std::sort(cuts.begin(), cuts.end());
    std::vector<double> angles;
    for (std::size_t k = 1; k < cuts.size(); ++k) angles.push_back(cuts[k] - cuts[k - 1]);
    CHECK(mnedo_success_probability(angles) <= medo_success_probability(theta, r) + 1e-12);
  }
  CHECK(mnedo_success_probability(std::vector<double>(4, 0.1)) == doctest::Approx(medo_success_probability(0.4, 4)));
}

TEST_CASE("MEDO Monte Carlo matches the closed form") {
  const double theta = kPi / 3.0;
  CVector v(2);
  v << std::cos(theta), std::sin(theta);
  const StateVector init(v);
  const auto target = StateVector::basis_state(2, 0);
  Rng rng(123);
  const int n = 10000;
  int hits = 0;
  for (int i = 0; i < n; ++i) hits += run_medo_sequence(init, target, 5, rng) ? 1 : 0;
  const double p = std::pow(std::cos(kPi / 15.0), 10);
  CHECK(medo_success_probability(theta, 5) == doctest::Approx(p).epsilon(1e-12));
  CHECK(std::abs(hits / static_cast<double>(n) - p) < 4.0 * std::sqrt(p * (1.0 - p) / n));
}

TEST_CASE("MUM closed form and Monte Carlo") {
  CHECK(mum_success_probability(10, 12.0) == doctest::Approx(0.58109).epsilon(1e-5));
  CHECK(mum_success_probability(5, 1.0) == 1.0);
  CHECK(mum_success_probability(0, 7.0) == 0.0);

  Rng rng(31);
  const Index d = 12;
  const auto h = eigendecompose(sample_gue(d, rng));
  const CMatrix basis = h.eigenvectors();
  const auto init = ground_state(h);
  const int n = 10000;
  std::vector<TrajectoryRecord> recs;
  for (int i = 0; i < n; ++i) recs.push_back(run_mum_trajectory(basis, init, 20, derive_seed(4, static_cast<std::uint64_t>(i), 2)));
  const auto curve = aggregate_success(recs, 20);
  for (int r : {1, 5, 10, 20}) {
    const double p = mum_success_probability(r, static_cast<double>(d));
    CHECK(std::abs(curve.at(r) - p) < 4.0 * std::sqrt(p * (1.0 - p) / n));
  }
}

TEST_CASE("DFT basis is unbiased") {
  Rng rng(3);
  const Index d = 9;
  const CMatrix b = eigendecompose(sample_gue(d, rng)).eigenvectors();
  const CMatrix f = dft_unbiased_basis(b);
  CHECK((f.adjoint() * f - CMatrix::Identity(d, d)).cwiseAbs().maxCoeff() < 1e-12);
  const RMatrix overlaps = (b.adjoint() * f).cwiseAbs2();
  CHECK((overlaps.array() - 1.0 / static_cast<double>(d)).abs().maxCoeff() < 1e-12);
}

TEST_CASE("bang-bang") {
  CMatrix z(2, 2);
  z << 1.0, 0.0, 0.0, -1.0;
  CMatrix x(2, 2);
  x << 0.0, 1.0, 1.0, 0.0;
  const auto h1 = eigendecompose(HermitianOperator(z));
  const auto h2 = eigendecompose(HermitianOperator(x));
  ProtocolConfig cfg;
  cfg.t_max = 2.0 * kPi;
  const auto res = run_bang_bang(h1, h2, StateVector::basis_state(2, 0), StateVector::basis_state(2, 1), 3, cfg);
  REQUIRE(res.fidelity.size() == 4);
  CHECK(res.fidelity[0] == 0.0);
  CHECK(res.fidelity[1] > 0.999);
  CHECK_FALSE(res.commuting);
  CHECK(res.durations.size() == 3);

  SmallLattice s;
  const auto b1 = eigendecompose(build_bose_hubbard(s.basis, BoseHubbardParams{0.0, 1.0, 3, 3}));
  const auto b2 = eigendecompose(build_bose_hubbard(s.basis, BoseHubbardParams{1.0, 0.01, 3, 3}));
  const auto target = s.basis.fock_state({1, 1, 1});
  const auto chain = run_bang_bang(b1, b2, s.ground, target, 10, cfg);
  CHECK(chain.fidelity[0] == doctest::Approx(std::norm(overlap(target, s.ground))));
  for (std::size_t r = 1; r < chain.fidelity.size(); ++r) CHECK(chain.fidelity[r] >= chain.fidelity[r - 1] - 1e-12);

  const auto same = run_bang_bang(h1, h1, StateVector::basis_state(2, 0), StateVector::basis_state(2, 1), 1, cfg);
  CHECK(same.commuting);
  CHECK(same.fidelity[1] == 0.0);
}
