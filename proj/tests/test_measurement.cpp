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
#include <map>
#include <set>

#include "doctest.h"
#include "fumes/errors.hpp"
#include "fumes/hamiltonians.hpp"
#include "fumes/measurement.hpp"

using namespace fumes;

namespace {

const Occupation kTarget{0, 2, 0, 2, 0, 2};

StateVector random_state(Index d, Rng& rng) {
  CVector c(d);
  for (Index k = 0; k < d; ++k) c[k] = complex_gaussian(rng);
  return StateVector::normalized(c);
}

void check_partition(const MeasurementScheme& s) {
  const Index d = s.dim();
  CMatrix sum = CMatrix::Zero(d, d);
  for (Index i = 0; i < s.outcome_count(); ++i) {
    const CMatrix p = s.projector(i).matrix();
    CHECK((p * p - p).cwiseAbs().maxCoeff() < 1e-9);
    CHECK((p - p.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
    for (Index j = i + 1; j < s.outcome_count(); ++j) {
      CHECK((p * s.projector(j).matrix()).cwiseAbs().maxCoeff() < 1e-9);
    }
    sum += p;
  }
  CHECK((sum - CMatrix::Identity(d, d)).cwiseAbs().maxCoeff() < 1e-9);
}

}  // namespace

TEST_CASE("Fock distance examples") {
  CHECK(fock_distance({1, 2, 0}, {1, 2, 0}) == 0);
  CHECK(fock_distance({1, 0}, {0, 1}) == 1);
  CHECK(fock_distance({0, 2, 0, 2, 0, 2}, {2, 0, 2, 0, 2, 0}) == 6);
  CHECK_THROWS_AS(fock_distance({1, 0}, {1, 1}), ValidationError);
}

TEST_CASE("Fock distance is a metric on N = 3, L = 3") {
  const auto b = enumerate_fock_basis(3, 3);
  for (const auto& x : b.states()) {
    for (const auto& y : b.states()) {
      const int dxy = fock_distance(x, y);
      CHECK(dxy >= 0);
      CHECK(dxy == fock_distance(y, x));
      CHECK((dxy == 0) == (x == y));
      for (const auto& z : b.states()) CHECK(dxy <= fock_distance(x, z) + fock_distance(z, y));
    }
  }
}

TEST_CASE("parity imbalance values") {
  CHECK(parity_imbalance({0, 2, 0, 2, 0, 2}) == HalfInteger::from_int(3));
  CHECK(parity_imbalance({1, 1, 1, 1, 1, 1}) == HalfInteger::from_int(0));
  CHECK(parity_imbalance({1, 0, 0}).str() == "1/2");
}

TEST_CASE("granular schemes") {
  const auto b = enumerate_fock_basis(6, 6);
  const auto s = build_granular_scheme(b, kTarget);
  CHECK(s.outcome_count() == 462);
  CHECK(s.target_rank() == 1);
  CHECK(s.label(s.target_index()) == to_string(kTarget));
  CHECK(std::norm(s.target_basis()(b.index_of(kTarget), 0)) == doctest::Approx(1.0));

  const auto small = build_granular_scheme(enumerate_fock_basis(1, 2), Occupation{1, 0});
  CHECK(small.outcome_count() == 2);
  CHECK(small.rank(0) == 1);
  CHECK(small.rank(1) == 1);

  check_partition(build_granular_scheme(enumerate_fock_basis(3, 3), Occupation{1, 1, 1}));
  CHECK_THROWS_AS(build_granular_scheme(b, Occupation{6, 0, 0, 0, 0, 1}), ValidationError);
}

TEST_CASE("binary schemes") {
  const auto b = enumerate_fock_basis(6, 6);
  const auto target = b.fock_state(kTarget);
  const auto s = build_binary_scheme(HermitianOperator::projector(target));
  CHECK(s.outcome_count() == 2);
  CHECK(s.target_rank() == 1);
  CHECK(s.rank(1) == 461);
  CHECK(outcome_probabilities(target, s)[0] == doctest::Approx(1.0));
  CHECK_THROWS_AS(build_binary_scheme(HermitianOperator::identity(4)), ValidationError);

  RVector half(2);
  half << 0.5, 0.5;
  CHECK_THROWS_AS(build_binary_scheme(HermitianOperator::diagonal(half)), ValidationError);

  const double r = 1.0 / std::sqrt(3.0);
  CVector v(3);
  v << r, r, r;
  check_partition(build_binary_scheme(HermitianOperator::projector(StateVector(v))));
}

TEST_CASE("subspace schemes") {
  const auto b22 = enumerate_fock_basis(2, 2);
  const auto s = build_subspace_scheme(b22, Occupation{1, 1});
  REQUIRE(s.outcome_count() == 2);
  CHECK(s.target_index() == 0);
  CHECK(s.rank(1) == 2);
  CHECK(s.label(1) == "D=1");

  const auto b = enumerate_fock_basis(6, 6);
  const auto big = build_subspace_scheme(b, kTarget);
  std::set<int> distances;
  for (const auto& n : b.states()) {
    const int dist = fock_distance(n, kTarget);
    if (dist > 0) distances.insert(dist);
  }
  CHECK(big.failure_count() == static_cast<Index>(distances.size()));
  Index total = 0;
  for (Index i = 0; i < big.outcome_count(); ++i) total += big.rank(i);
  CHECK(total == 462);
  check_partition(build_subspace_scheme(enumerate_fock_basis(3, 3), Occupation{0, 3, 0}));
}

TEST_CASE("parity schemes") {
  const auto b = enumerate_fock_basis(6, 6);
  const auto s = build_parity_imbalance_scheme(b, HalfInteger::from_int(3));
  CHECK(s.target_rank() == 56);
  CHECK(s.label(s.target_index()) == "Z=3");
  CHECK_THROWS_AS(build_parity_imbalance_scheme(b, HalfInteger::from_int(4)), ValidationError);

  const auto odd = enumerate_fock_basis(3, 3);
  const auto values = parity_values(odd);
  CHECK(values.front() == HalfInteger::from_twice(1));
  check_partition(build_parity_imbalance_scheme(odd, HalfInteger::from_twice(3)));
}

TEST_CASE("outcome probabilities") {
  const auto s = build_computational_scheme(2, 0);
  const double r = 1.0 / std::sqrt(2.0);
  CVector v(2);
  v << r, r;
  const auto p = outcome_probabilities(StateVector(v), s);
  CHECK(p[0] == doctest::Approx(0.5));
  CHECK(p[1] == doctest::Approx(0.5));
  CHECK(outcome_probabilities(StateVector::basis_state(2, 1), s)[1] == 1.0);
  CHECK_THROWS_AS(outcome_probabilities(StateVector::basis_state(3, 1), s), ValidationError);
}

TEST_CASE("granularity refinement of outcome probabilities") {
  const auto b = enumerate_fock_basis(4, 4);
  const Occupation t{0, 2, 0, 2};
  const auto gran = build_granular_scheme(b, t);
  const auto sub = build_subspace_scheme(b, t);
  const auto bin = build_binary_scheme(HermitianOperator::projector(b.fock_state(t)));
  Rng rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    const auto psi = random_state(b.dim(), rng);
    const auto pg = outcome_probabilities(psi, gran);
    const auto ps = outcome_probabilities(psi, sub);
    const auto pb = outcome_probabilities(psi, bin);
    CHECK(std::abs((1.0 - ps[0]) - pb[1]) < 1e-10);
    std::map<std::string, double> by_class;
    for (Index k = 0; k < b.dim(); ++k) {
      by_class["D=" + std::to_string(fock_distance(b.state(k), t))] += pg[static_cast<std::size_t>(k)];
    }
    for (Index i = 1; i < sub.outcome_count(); ++i) CHECK(std::abs(by_class[sub.label(i)] - ps[static_cast<std::size_t>(i)]) < 1e-10);
  }
}

TEST_CASE("measurement sampling matches Born probabilities") {
  const auto s = build_computational_scheme(4, 0);
  CVector v(4);
  v << 0.1, Complex(0.0, 0.3), 0.5, -0.7;
  const auto psi = StateVector::normalized(v);
  const auto p = outcome_probabilities(psi, s);
  Rng rng(2024);
  const int n = 100000;
  std::vector<int> counts(4, 0);
  for (int i = 0; i < n; ++i) {
    const auto out = measure(psi, s, rng);
    ++counts[static_cast<std::size_t>(out.outcome_index)];
    CHECK(out.success == (out.outcome_index == s.target_index()));
  }
  for (std::size_t k = 0; k < 4; ++k) {
    const double sigma = std::sqrt(n * p[k] * (1.0 - p[k]));
    CHECK(std::abs(counts[k] - n * p[k]) < 4.0 * sigma);
  }
}

TEST_CASE("collapse properties") {
  const auto b = enumerate_fock_basis(3, 3);
  const auto target = b.fock_state({1, 1, 1});
  const auto bin = build_binary_scheme(HermitianOperator::projector(target));
  Rng rng(4);
  const auto psi = random_state(b.dim(), rng);
  const auto failed = collapse(psi, bin, 1);
  CHECK(std::norm(overlap(target, failed)) < 1e-9);

  const auto in_target = measure(target, bin, rng);
  CHECK(in_target.success);
  CHECK(std::abs(std::abs(overlap(in_target.collapsed, target)) - 1.0) < 1e-12);

  const auto sub = build_subspace_scheme(b, {1, 1, 1});
  for (int i = 0; i < 20; ++i) {
    const auto first = measure(random_state(b.dim(), rng), sub, rng);
    const auto second = measure(first.collapsed, sub, rng);
    CHECK(second.outcome_index == first.outcome_index);
    CHECK(second.probability == doctest::Approx(1.0));
  }
}

TEST_CASE("reachability: diagonal Hamiltonian is unreachable") {
  RVector e(4);
  e << 0.0, 1.0, 2.0, 3.0;
  const auto rep = check_reachability(HermitianOperator::diagonal(e), build_computational_scheme(4, 0));
  CHECK_FALSE(rep.reachable);
  CHECK(rep.exhaustive);
  CHECK(rep.subsets_checked == 7);
  CHECK(rep.violation_count == 7);
}

TEST_CASE("reachability: two-level hopping is reachable") {
  CMatrix h(2, 2);
  h << 0.0, -1.0, -1.0, 0.0;
  const auto rep = check_reachability(HermitianOperator(h), build_computational_scheme(2, 0));
  CHECK(rep.reachable);
  CHECK(rep.subsets_checked == 1);
}

TEST_CASE("reachability: block couplings agree with dense commutators") {
  const auto b = enumerate_fock_basis(2, 3);
  // hopping on the first bond only, so some failure sums commute with H
  CMatrix m = build_bose_hubbard(b, BoseHubbardParams{1.0, 0.0, 3, 2}).matrix();
  const auto d = b.dim();
  for (Index i = 0; i < d; ++i) {
    for (Index j = 0; j < d; ++j) {
      if (i != j && b.state(i)[0] == b.state(j)[0]) m(i, j) = 0.0;
    }
  }
  const auto s = build_granular_scheme(b, Occupation{2, 0, 0});
  ReachabilityOptions opt;
  opt.max_reported = 100000;
  const auto rep = check_reachability(HermitianOperator(m), s, opt);
  std::uint64_t dense_violations = 0;
  const Index m_fail = s.failure_count();
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << m_fail); ++mask) {
    CMatrix q = CMatrix::Zero(d, d);
    Index bit = 0;
    for (Index i = 0; i < s.outcome_count(); ++i) {
      if (i == s.target_index()) continue;
      if ((mask >> bit) & 1U) q += s.projector(i).matrix();
      ++bit;
    }
    if ((q * m - m * q).norm() < 1e-9) ++dense_violations;
  }
  CHECK(rep.subsets_checked == (std::uint64_t{1} << m_fail) - 1);
  CHECK(rep.violation_count == dense_violations);
}

TEST_CASE("reachability: Bose-Hubbard J/U = 1.5 granular is reachable (sampled)") {
  const auto b = enumerate_fock_basis(6, 6);
  const auto h = build_bose_hubbard(b, BoseHubbardParams{1.0, 1.0 / 1.5, 6, 6});
  const auto rep = check_reachability(h, build_granular_scheme(b, kTarget));
  CHECK(rep.reachable);
  CHECK_FALSE(rep.exhaustive);
  CHECK(rep.subsets_checked == 461 + 1000);

  ReachabilityOptions strict;
  strict.require_exhaustive = true;
  CHECK_THROWS_AS(check_reachability(h, build_granular_scheme(b, kTarget), strict), CapacityError);
}
