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

#include "doctest.h"
#include "fumes/errors.hpp"
#include "fumes/hamiltonians.hpp"
#include "fumes/kernels.hpp"

using namespace fumes;
using namespace fumes::kernels;

namespace {

struct Fixture {
  RVector energies;
  CMatrix rows;
  CMatrix coeffs;
};

Fixture make_fixture(Index d, Index k_rows, Index n_states, std::uint64_t seed) {
  Rng rng(seed);
  const auto spec = eigendecompose(sample_gue(d, rng));
  Fixture f{spec.eigenvalues(), CMatrix(k_rows, d), CMatrix(d, n_states)};
  for (Index i = 0; i < k_rows; ++i)
    for (Index k = 0; k < d; ++k) f.rows(i, k) = complex_gaussian(rng);
  for (Index s = 0; s < n_states; ++s) {
    for (Index k = 0; k < d; ++k) f.coeffs(k, s) = complex_gaussian(rng);
    f.coeffs.col(s).normalize();
  }
  return f;
}

}  // namespace

TEST_CASE("uniform grid") {
  const auto t = uniform_grid(2.0, 4);
  REQUIRE(t.size() == 4);
  CHECK(t[0] == 0.5);
  CHECK(t[3] == 2.0);
  CHECK_THROWS_AS(uniform_grid(0.0, 4), ValidationError);
  CHECK_THROWS_AS(uniform_grid(1.0, 0), ValidationError);
}

TEST_CASE("grid evaluator matches the serial reference") {
  const auto f = make_fixture(24, 3, 5, 11);
  const auto times = uniform_grid(40.0, 700);
  const GridEvaluator ev(f.energies, times);
  const RMatrix fast = ev.probabilities(f.rows, f.coeffs, 4);
  const RMatrix ref = probabilities_reference(f.rows, f.coeffs, f.energies, times);
  CHECK((fast - ref).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("grid evaluator is bit-identical across worker counts") {
  const auto f = make_fixture(30, 1, 7, 12);
  const GridEvaluator ev(f.energies, uniform_grid(25.0, 1500));
  const RMatrix one = ev.probabilities(f.rows, f.coeffs, 1);
  const RMatrix eight = ev.probabilities(f.rows, f.coeffs, 8);
  CHECK(one == eight);
}

TEST_CASE("cached and uncached phase tables agree") {
  const auto f = make_fixture(16, 2, 2, 13);
  // d * G above the cache limit forces per-block phase computation
  const Index g = GridEvaluator::kPhaseCacheEntries / 16 + 300;
  const auto times = uniform_grid(60.0, g);
  const GridEvaluator big(f.energies, times);
  const std::vector<double> head(times.begin(), times.begin() + 600);
  const GridEvaluator small(f.energies, head);
  const RMatrix a = big.probabilities(f.rows, f.coeffs, 2);
  const RMatrix b = small.probabilities(f.rows, f.coeffs, 2);
  CHECK((a.leftCols(600) - b).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("grid evaluator rejects mismatched shapes") {
  const auto f = make_fixture(8, 1, 1, 14);
  const GridEvaluator ev(f.energies, uniform_grid(1.0, 10));
  CHECK_THROWS_AS(ev.probabilities(CMatrix::Zero(1, 7), f.coeffs), ValidationError);
  CHECK_THROWS_AS(ev.probabilities(f.rows, CMatrix::Zero(9, 1)), ValidationError);
}

TEST_CASE("parallel_map equals serial_map") {
  auto fn = [](std::size_t i) {
    Rng rng(derive_seed(5, i, 2));
    double acc = 0.0;
    for (int k = 0; k < 100; ++k) acc += uniform01(rng);
    return acc;
  };
  const auto serial = serial_map(257, fn);
  CHECK(parallel_map(257, 1, fn) == serial);
  CHECK(parallel_map(257, 8, fn) == serial);
  CHECK(parallel_map(0, 4, fn).empty());
}
