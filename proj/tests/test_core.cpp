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

#include "doctest.h"
#include "fumes/core.hpp"
#include "fumes/errors.hpp"
#include "fumes/hamiltonians.hpp"
#include "fumes/random.hpp"

using namespace fumes;

namespace {

CVector vec(std::initializer_list<Complex> v) {
  CVector out(static_cast<Index>(v.size()));
  Index i = 0;
  for (auto x : v) out[i++] = x;
  return out;
}

HermitianOperator two_level(double j) {
  CMatrix h(2, 2);
  h << 0.0, -j, -j, 0.0;
  return HermitianOperator(h);
}

StateVector random_state(Index d, Rng& rng) {
  CVector c(d);
  for (Index k = 0; k < d; ++k) c[k] = complex_gaussian(rng);
  return StateVector::normalized(c);
}

}  // namespace

TEST_CASE("state vector rejects unnormalized amplitudes") {
  CHECK_THROWS_AS(StateVector(vec({1.0, 1.0})), ValidationError);
  CHECK_THROWS_AS(StateVector::normalized(CVector::Zero(3)), ValidationError);
  CHECK(StateVector::normalized(vec({3.0, 4.0}))[1].real() == doctest::Approx(0.8));
}

TEST_CASE("hermitian operator validation") {
  CMatrix m(2, 2);
  m << 1.0, Complex(0.0, 1.0), Complex(0.0, 1.0), 2.0;
  CHECK_THROWS_AS(HermitianOperator{m}, ValidationError);
  CHECK_THROWS_AS(HermitianOperator{CMatrix::Zero(2, 3)}, ValidationError);
}

TEST_CASE("eigendecompose of a diagonal operator") {
  RVector diag(3);
  diag << 1.0, 2.0, 3.0;
  const auto spec = eigendecompose(HermitianOperator::diagonal(diag));
  CHECK(spec.eigenvalues()[0] == doctest::Approx(1.0));
  CHECK(spec.eigenvalues()[2] == doctest::Approx(3.0));
  CHECK((spec.eigenvectors().cwiseAbs() - RMatrix::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("eigendecompose of the two-level hopping matrix") {
  const double j = 0.7;
  const auto spec = eigendecompose(two_level(j));
  CHECK(spec.eigenvalues()[0] == doctest::Approx(-j));
  CHECK(spec.eigenvalues()[1] == doctest::Approx(j));
  const double s = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(overlap(spec.eigenstate(0), StateVector(vec({s, s})))) == doctest::Approx(1.0));
  CHECK(std::abs(overlap(spec.eigenstate(1), StateVector(vec({s, -s})))) == doctest::Approx(1.0));
}

TEST_CASE("spectral decomposition invariants for GUE samples up to d = 512") {
  for (Index d : {5, 64, 512}) {
    Rng rng(static_cast<std::uint64_t>(d));
    const auto h = sample_gue(d, rng);
    const auto spec = eigendecompose(h);
    const CMatrix& v = spec.eigenvectors();
    CHECK((v.adjoint() * v - CMatrix::Identity(d, d)).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((spec.reconstruct() - h.matrix()).cwiseAbs().maxCoeff() < 1e-9);
    for (Index k = 1; k < d; ++k) CHECK(spec.eigenvalues()[k] >= spec.eigenvalues()[k - 1]);
  }
}

TEST_CASE("GUE d = 50 spectrum follows the semicircle (KS at 1%)") {
  const Index d = 50;
  std::vector<double> x;
  for (int s = 0; s < 100; ++s) {
    Rng rng = make_rng(99, static_cast<std::uint64_t>(s));
    const auto spec = eigendecompose(sample_gue(d, rng));
    for (Index k = 0; k < d; ++k) x.push_back(spec.eigenvalues()[k] / (2.0 * std::sqrt(static_cast<double>(d))));
  }
  std::sort(x.begin(), x.end());
  auto cdf = [](double u) {
    u = std::clamp(u, -1.0, 1.0);
    return 0.5 + (u * std::sqrt(1.0 - u * u) + std::asin(u)) / std::numbers::pi;
  };
  const auto n = static_cast<double>(x.size());
  double ks = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = cdf(x[i]);
    ks = std::max({ks, std::abs(f - static_cast<double>(i) / n), std::abs(f - static_cast<double>(i + 1) / n)});
  }
  CHECK(ks < 1.63 / std::sqrt(n));
}

TEST_CASE("evolve: identity at t = 0, Rabi transfer, eigenstate phase") {
  const double j = 1.3;
  const auto spec = eigendecompose(two_level(j));
  const auto up = StateVector::basis_state(2, 0);
  const auto same = evolve(spec, up, 0.0);
  CHECK(same.amplitudes() == up.amplitudes());

  const auto flipped = evolve(spec, up, std::numbers::pi / (2.0 * j));
  CHECK(std::norm(flipped[1]) == doctest::Approx(1.0).epsilon(1e-12));
  for (double t : {0.1, 0.5, 2.0}) {
    CHECK(std::norm(evolve(spec, up, t)[1]) == doctest::Approx(std::pow(std::sin(j * t), 2)).epsilon(1e-12));
  }

  const auto e0 = spec.eigenstate(0);
  const auto out = evolve(spec, e0, 3.7);
  CHECK(std::abs(overlap(e0, out)) == doctest::Approx(1.0).epsilon(1e-10));
  const Complex expected = std::polar(1.0, -spec.eigenvalues()[0] * 3.7);
  CHECK(std::abs(overlap(e0, out) - expected) < 1e-10);
}

TEST_CASE("evolution is unitary and a one-parameter group") {
  Rng rng(5);
  const auto spec = eigendecompose(sample_gue(16, rng));
  for (int i = 0; i < 100; ++i) {
    const auto s = random_state(16, rng);
    const double t1 = 5.0 * uniform01(rng);
    const double t2 = 5.0 * uniform01(rng);
    const auto a = evolve(spec, evolve(spec, s, t1), t2);
    const auto b = evolve(spec, s, t1 + t2);
    CHECK(std::abs(a.amplitudes().norm() - 1.0) < 1e-10);
    CHECK((a.amplitudes() - b.amplitudes()).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("evolve and overlap reject dimension mismatches") {
  const auto spec = eigendecompose(two_level(1.0));
  CHECK_THROWS_AS(evolve(spec, StateVector::basis_state(3, 0), 1.0), ValidationError);
  CHECK_THROWS_AS(overlap(StateVector::basis_state(2, 0), StateVector::basis_state(3, 0)), ValidationError);
  CHECK_THROWS_AS(expectation(HermitianOperator::identity(3), StateVector::basis_state(2, 0)), ValidationError);
}

TEST_CASE("overlap values and conjugate symmetry") {
  const double s = 1.0 / std::sqrt(2.0);
  const auto a = StateVector::basis_state(2, 0);
  const auto b = StateVector(vec({s, s}));
  CHECK(overlap(a, a) == Complex(1.0, 0.0));
  CHECK(std::abs(overlap(a, StateVector::basis_state(2, 1))) == 0.0);
  CHECK(overlap(a, b).real() == doctest::Approx(s));

  Rng rng(11);
  for (int i = 0; i < 20; ++i) {
    const auto x = random_state(7, rng);
    const auto y = random_state(7, rng);
    CHECK(std::abs(overlap(x, y) - std::conj(overlap(y, x))) < 1e-15);
    CHECK(std::abs(overlap(x, y)) <= 1.0 + 1e-12);
  }
}

TEST_CASE("expectation values") {
  const double s = 1.0 / std::sqrt(2.0);
  const auto plus = StateVector(vec({s, s}));
  CHECK(expectation(HermitianOperator::identity(2), plus) == doctest::Approx(1.0));
  CHECK(expectation(HermitianOperator::projector(plus), plus) == doctest::Approx(1.0));
  RVector z(2);
  z << 1.0, -1.0;
  CHECK(std::abs(expectation(HermitianOperator::diagonal(z), plus)) < 1e-15);

  Rng rng(3);
  const auto h = sample_gue(9, rng);
  const auto spec = eigendecompose(h);
  for (int i = 0; i < 20; ++i) {
    const double e = expectation(h, random_state(9, rng));
    CHECK(e >= spec.eigenvalues()[0] - 1e-10);
    CHECK(e <= spec.eigenvalues()[8] + 1e-10);
  }
}

TEST_CASE("seed derivation is deterministic and collision free") {
  CHECK(derive_seed(1, 2, 3) == derive_seed(1, 2, 3));
  std::vector<std::uint64_t> seeds;
  for (std::uint64_t s = 0; s < 4; ++s) {
    for (std::uint64_t i = 0; i < 5000; ++i) seeds.push_back(derive_seed(42, i, s));
  }
  std::sort(seeds.begin(), seeds.end());
  CHECK(std::adjacent_find(seeds.begin(), seeds.end()) == seeds.end());
}
