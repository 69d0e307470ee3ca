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

namespace {

constexpr int kMaxCandidates = 32;

Index grid_size(double t_max, double bandwidth, int grid_points) {
  Index n = grid_points;
  if (bandwidth > 0.0) {
    const double spacing_cap = std::numbers::pi / (4.0 * bandwidth);
    n = std::max<Index>(n, static_cast<Index>(std::ceil(t_max / spacing_cap)));
  }
  return n;
}

const ProtocolConfig& validated(const ProtocolConfig& cfg) {
  cfg.validate();
  return cfg;
}

}  // namespace

void ProtocolConfig::validate() const {
  if (grid_points < 64) throw ValidationError("ProtocolConfig: grid_points must be >= 64");
  if (max_rounds < 1) throw ValidationError("ProtocolConfig: max_rounds must be >= 1");
  if (!(t_max_factor > 0.0)) throw ValidationError("ProtocolConfig: t_max_factor must be positive");
  if (t_max < 0.0) throw ValidationError("ProtocolConfig: t_max must be >= 0");
  if (refine_iters < 0) throw ValidationError("ProtocolConfig: refine_iters must be >= 0");
  if (!(rel_tol > 0.0)) throw ValidationError("ProtocolConfig: rel_tol must be positive");
  if (bang_bang_sweeps < 1) throw ValidationError("ProtocolConfig: bang_bang_sweeps must be >= 1");
}

double search_window(const SpectralDecomposition& spec, const ProtocolConfig& cfg) {
  if (cfg.t_max > 0.0) return cfg.t_max;
  const double w = spec.bandwidth();
  // no dynamics to resolve; any positive window will do
  if (spec.dim() < 2 || !(w > 0.0)) return cfg.t_max_factor * 2.0 * std::numbers::pi;
  const double mean_spacing = w / static_cast<double>(spec.dim() - 1);
  return cfg.t_max_factor * 2.0 * std::numbers::pi / mean_spacing;
}

WaitTimeOptimizer::WaitTimeOptimizer(const SpectralDecomposition& spec, const ProtocolConfig& cfg)
    : cfg_(validated(cfg)),
      energies_(spec.eigenvalues()),
      eigenvectors_(spec.eigenvectors()),
      t_max_(search_window(spec, cfg)),
      bandwidth_(spec.bandwidth()),
      evaluator_(spec.eigenvalues(), kernels::uniform_grid(t_max_, grid_size(t_max_, bandwidth_, cfg.grid_points))) {}

CMatrix WaitTimeOptimizer::target_rows(const CMatrix& target_basis) const {
  if (target_basis.rows() != eigenvectors_.rows()) throw ValidationError("target_rows: dimension mismatch");
  return target_basis.adjoint() * eigenvectors_;
}

double WaitTimeOptimizer::population(const CVector& coeffs, const CMatrix& rows, double t) const {
  CVector phased(coeffs.size());
  for (Index k = 0; k < coeffs.size(); ++k) phased[k] = coeffs[k] * std::polar(1.0, -energies_[k] * t);
  return (rows * phased).squaredNorm();
}

WaitTime WaitTimeOptimizer::optimize(const CVector& coeffs, const CMatrix& rows) const {
  return optimize_batch(CMatrix(coeffs), rows).front();
}

std::vector<WaitTime> WaitTimeOptimizer::optimize_batch(const CMatrix& coeffs, const CMatrix& rows) const {
  const RMatrix values = evaluator_.probabilities(rows, coeffs, cfg_.workers);
  // row-major copy so each state's grid values are contiguous
  const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rm = values;
  return kernels::parallel_map(static_cast<std::size_t>(coeffs.cols()), cfg_.workers, [&](std::size_t s) {
    return select_peak(coeffs.col(static_cast<Index>(s)), rows, rm.data() + s * static_cast<std::size_t>(rm.cols()));
  });
}

WaitTime WaitTimeOptimizer::select_peak(const CVector& coeffs, const CMatrix& rows, const double* values) const {
  const auto& t = evaluator_.times();
  const auto g = static_cast<Index>(t.size());
  const double p0 = population(coeffs, rows, 0.0);

  double vmax = p0;
  double vmin = p0;
  for (Index j = 0; j < g; ++j) {
    vmax = std::max(vmax, values[j]);
    vmin = std::min(vmin, values[j]);
  }
  if (vmax - vmin <= cfg_.rel_tol) return WaitTime{t.front(), values[0], true};

  const double h = t_max_ / static_cast<double>(g);
  const double slack = bandwidth_ * bandwidth_ * h * h / 8.0 + cfg_.rel_tol;

  std::vector<Index> candidates;
  for (Index j = 0; j < g; ++j) {
    const double left = j == 0 ? p0 : values[j - 1];
    const double right = j + 1 < g ? values[j + 1] : -1.0;
    if (values[j] >= left && values[j] >= right && values[j] >= vmax - slack) candidates.push_back(j);
  }
  if (candidates.size() > kMaxCandidates) {
    std::stable_sort(candidates.begin(), candidates.end(), [&](Index a, Index b) { return values[a] > values[b]; });
    candidates.resize(kMaxCandidates);
    std::sort(candidates.begin(), candidates.end());
  }

  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  std::vector<WaitTime> refined;
  refined.reserve(candidates.size());
  for (Index j : candidates) {
    WaitTime best{t[static_cast<std::size_t>(j)], values[j], false};
    double a = j == 0 ? 0.0 : t[static_cast<std::size_t>(j - 1)];
    double b = j + 1 < g ? t[static_cast<std::size_t>(j + 1)] : t_max_;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = population(coeffs, rows, x1);
    double f2 = population(coeffs, rows, x2);
    for (int it = 0; it < cfg_.refine_iters; ++it) {
      if (f1 >= f2) {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - inv_phi * (b - a);
        f1 = population(coeffs, rows, x1);
      } else {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + inv_phi * (b - a);
        f2 = population(coeffs, rows, x2);
      }
    }
    if (f1 > best.p && x1 > 0.0) best = WaitTime{x1, f1, false};
    if (f2 > best.p && x2 > 0.0) best = WaitTime{x2, f2, false};
    refined.push_back(best);
  }

  double top = refined.front().p;
  for (const auto& w : refined) top = std::max(top, w.p);
  for (const auto& w : refined) {
    if (w.p >= top - cfg_.rel_tol) return w;
  }
  return refined.front();
}

WaitTime optimal_wait_time(const SpectralDecomposition& spec, const StateVector& state,
                           const HermitianOperator& target_projector, const ProtocolConfig& cfg) {
  const Index d = spec.dim();
  if (state.dim() != d || target_projector.dim() != d) throw ValidationError("optimal_wait_time: dimension mismatch");
  const CMatrix& p = target_projector.matrix();
  if ((p * p - p).cwiseAbs().maxCoeff() > 1e-9) throw ValidationError("optimal_wait_time: target is not a projector");
  Eigen::SelfAdjointEigenSolver<CMatrix> es(p);
  if (es.info() != Eigen::Success) throw NumericalError("optimal_wait_time: projector diagonalization failed");
  const auto rank = static_cast<Index>(std::llround(p.trace().real()));
  if (rank < 1) throw ValidationError("optimal_wait_time: target projector has rank 0");
  const CMatrix target_basis = es.eigenvectors().rightCols(rank);
  WaitTimeOptimizer opt(spec, cfg);
  return opt.optimize(spec.to_eigenbasis(state), opt.target_rows(target_basis));
}

}  // namespace fumes
