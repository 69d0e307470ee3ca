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

#include "fumes/kernels.hpp"

#include <algorithm>
#include <cmath>

#include "fumes/errors.hpp"

namespace fumes::kernels {

std::vector<double> uniform_grid(double t_max, Index n) {
  if (!(t_max > 0.0) || n < 1) throw ValidationError("uniform_grid: need t_max > 0 and n >= 1");
  std::vector<double> t(static_cast<std::size_t>(n));
  for (Index j = 0; j < n; ++j) t[static_cast<std::size_t>(j)] = t_max * static_cast<double>(j + 1) / static_cast<double>(n);
  return t;
}

GridEvaluator::GridEvaluator(RVector energies, std::vector<double> times)
    : energies_(std::move(energies)), times_(std::move(times)) {
  const Index d = energies_.size();
  const auto g = static_cast<Index>(times_.size());
  if (d * g <= kPhaseCacheEntries) {
    CMatrix table(d, g);
    phase_block(0, g, table);
    phases_ = std::move(table);
  }
}

void GridEvaluator::phase_block(Index first, Index count, CMatrix& out) const {
  const Index d = energies_.size();
  out.resize(d, count);
  for (Index j = 0; j < count; ++j) {
    const double t = times_[static_cast<std::size_t>(first + j)];
    for (Index k = 0; k < d; ++k) out(k, j) = std::polar(1.0, -energies_[k] * t);
  }
}

RMatrix GridEvaluator::probabilities(const CMatrix& rows, const CMatrix& coeffs, int workers) const {
  const Index d = energies_.size();
  if (rows.cols() != d || coeffs.rows() != d) throw ValidationError("GridEvaluator: dimension mismatch");
  const Index k_rows = rows.rows();
  const Index n_states = coeffs.cols();
  const auto g = static_cast<Index>(times_.size());

  // amplitude rows for every (state, target row) pair
  CMatrix amp(n_states * k_rows, d);
  for (Index s = 0; s < n_states; ++s) {
    amp.middleRows(s * k_rows, k_rows) = rows * coeffs.col(s).asDiagonal();
  }

  RMatrix out(n_states, g);
  const Index n_blocks = (g + kBlock - 1) / kBlock;
#pragma omp parallel for schedule(static) num_threads(workers > 0 ? workers : 1)
  for (Index b = 0; b < n_blocks; ++b) {
    const Index first = b * kBlock;
    const Index count = std::min(kBlock, g - first);
    CMatrix local;
    if (!phases_) phase_block(first, count, local);
    const CMatrix values = phases_ ? CMatrix(amp * phases_->middleCols(first, count)) : CMatrix(amp * local);
    for (Index s = 0; s < n_states; ++s) {
      out.block(s, first, 1, count) = values.middleRows(s * k_rows, k_rows).cwiseAbs2().colwise().sum();
    }
  }
  return out;
}

RMatrix probabilities_reference(const CMatrix& rows, const CMatrix& coeffs, const RVector& energies,
                                const std::vector<double>& times) {
  const Index d = energies.size();
  if (rows.cols() != d || coeffs.rows() != d) throw ValidationError("probabilities_reference: dimension mismatch");
  RMatrix out(coeffs.cols(), static_cast<Index>(times.size()));
  for (Index s = 0; s < coeffs.cols(); ++s) {
    for (std::size_t j = 0; j < times.size(); ++j) {
      double p = 0.0;
      for (Index r = 0; r < rows.rows(); ++r) {
        Complex a = 0.0;
        for (Index k = 0; k < d; ++k) a += rows(r, k) * coeffs(k, s) * std::polar(1.0, -energies[k] * times[j]);
        p += std::norm(a);
      }
      out(s, static_cast<Index>(j)) = p;
    }
  }
  return out;
}

}  // namespace fumes::kernels
