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

// Data-parallel inner loops. Each kernel has a plain serial reference that
// the tests compare against; the OpenMP versions give bit-identical results
// for any worker count because the work split never changes the arithmetic
// performed for a given output element.

#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include <omp.h>

#include "fumes/core.hpp"

namespace fumes::kernels {

/// t_j = t_max * j / n for j = 1..n.
std::vector<double> uniform_grid(double t_max, Index n);

/// Evaluates target-subspace populations along a fixed time grid:
///
///   P(s, j) = sum_r | sum_k rows(r, k) c_s(k) exp(-i E_k t_j) |^2
///
/// where rows = Phi_t^dagger V (K x d) and c_s are eigenbasis coefficients of
/// the start states (columns of `coeffs`). The time axis is processed in
/// fixed-size blocks, each a single complex GEMM.
class GridEvaluator {
 public:
  static constexpr Index kBlock = 256;
  /// Phase tables larger than this many entries are recomputed per call.
  static constexpr Index kPhaseCacheEntries = Index{8} << 20;

  GridEvaluator(RVector energies, std::vector<double> times);

  const std::vector<double>& times() const { return times_; }
  const RVector& energies() const { return energies_; }

  /// S x G matrix of populations.
  RMatrix probabilities(const CMatrix& rows, const CMatrix& coeffs, int workers = 1) const;

 private:
  void phase_block(Index first, Index count, CMatrix& out) const;

  RVector energies_;
  std::vector<double> times_;
  std::optional<CMatrix> phases_;
};

/// Straight triple loop over states, grid points and eigenvalues.
RMatrix probabilities_reference(const CMatrix& rows, const CMatrix& coeffs, const RVector& energies,
                                const std::vector<double>& times);

/// out[i] = fn(i) for i in [0, n), dynamically scheduled over `workers`
/// threads. fn must only depend on i.
template <class Fn>
auto parallel_map(std::size_t n, int workers, Fn&& fn) -> std::vector<decltype(fn(std::size_t{0}))> {
  using R = decltype(fn(std::size_t{0}));
  std::vector<std::optional<R>> slots(n);
#pragma omp parallel for schedule(dynamic, 1) num_threads(workers > 0 ? workers : 1)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
    slots[static_cast<std::size_t>(i)].emplace(fn(static_cast<std::size_t>(i)));
  }
  std::vector<R> out;
  out.reserve(n);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

template <class Fn>
auto serial_map(std::size_t n, Fn&& fn) -> std::vector<decltype(fn(std::size_t{0}))> {
  std::vector<decltype(fn(std::size_t{0}))> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(fn(i));
  return out;
}

}  // namespace fumes::kernels
