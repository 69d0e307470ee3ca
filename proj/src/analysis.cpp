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


#include "fumes/analysis.hpp"

#include <cmath>

#include "fumes/errors.hpp"
#include "fumes/kernels.hpp"

namespace fumes {

SuccessCurve aggregate_success(const std::vector<TrajectoryRecord>& records, int r_max) {
  if (records.empty()) throw ValidationError("aggregate_success: no records");
  if (r_max < 1) throw ValidationError("aggregate_success: r_max must be >= 1");
  std::vector<std::size_t> hits(static_cast<std::size_t>(r_max), 0);
  for (const auto& rec : records) {
    if (rec.success_round && *rec.success_round <= r_max) ++hits[static_cast<std::size_t>(*rec.success_round - 1)];
  }
  SuccessCurve c;
  c.n_trajectories = records.size();
  const auto n = static_cast<double>(records.size());
  std::size_t cum = 0;
  for (int r = 0; r < r_max; ++r) {
    cum += hits[static_cast<std::size_t>(r)];
    const double p = static_cast<double>(cum) / n;
    c.p.push_back(p);
    c.stderr_p.push_back(std::sqrt(p * (1.0 - p) / n));
  }
  return c;
}

std::vector<std::optional<double>> effective_dimension(const SuccessCurve& curve) {
  std::vector<std::optional<double>> out;
  out.reserve(curve.p.size());
  for (std::size_t i = 0; i < curve.p.size(); ++i) {
    const double p = curve.p[i];
    if (!(p > 0.0 && p < 1.0)) {
      out.emplace_back();
      continue;
    }
    const double r = static_cast<double>(i + 1);
    // 1 - (1-p)^(1/r) via expm1/log1p keeps precision for small p
    out.emplace_back(-1.0 / std::expm1(std::log1p(-p) / r));
  }
  return out;
}

std::optional<double> mean_effective_dimension(const SuccessCurve& curve, int r_lo, int r_hi) {
  const auto d_eff = effective_dimension(curve);
  double sum = 0.0;
  int n = 0;
  for (int r = std::max(r_lo, 1); r <= std::min(r_hi, curve.r_max()); ++r) {
    if (const auto& v = d_eff[static_cast<std::size_t>(r - 1)]) {
      sum += *v;
      ++n;
    }
  }
  if (n == 0) return std::nullopt;
  return sum / n;
}

namespace {

void check_signs(const SignVector& w, int sites) {
  if (static_cast<int>(w.size()) != sites) throw ValidationError("sign vector length must equal the site count");
  for (int s : w) {
    if (s != 1 && s != -1) throw ValidationError("sign vector entries must be +1 or -1");
  }
}

/// Site means <n_i> and covariance <n_i n_j> - <n_i><n_j>.
void site_moments(const StateVector& state, const FockBasis& basis, RVector& mean, RMatrix& cov) {
  if (state.dim() != basis.dim()) throw ValidationError("state and basis dimensions differ");
  const int l = basis.sites();
  mean = RVector::Zero(l);
  RMatrix second = RMatrix::Zero(l, l);
  for (Index k = 0; k < basis.dim(); ++k) {
    const double w = std::norm(state[k]);
    if (w == 0.0) continue;
    const Occupation& n = basis.state(k);
    for (int i = 0; i < l; ++i) {
      mean[i] += w * n[static_cast<std::size_t>(i)];
      for (int j = 0; j < l; ++j) second(i, j) += w * n[static_cast<std::size_t>(i)] * n[static_cast<std::size_t>(j)];
    }
  }
  cov = second - mean * mean.transpose();
}

}  // namespace

double fisher_information(const StateVector& state, const SignVector& w, const FockBasis& basis) {
  check_signs(w, basis.sites());
  if (state.dim() != basis.dim()) throw ValidationError("fisher_information: dimension mismatch");
  double s1 = 0.0;
  double s2 = 0.0;
  for (Index k = 0; k < basis.dim(); ++k) {
    const double p = std::norm(state[k]);
    double s = 0.0;
    for (int j = 0; j < basis.sites(); ++j) s += w[static_cast<std::size_t>(j)] * basis.state(k)[static_cast<std::size_t>(j)];
    s1 += p * s;
    s2 += p * s * s;
  }
  return 4.0 * (s2 - s1 * s1);
}

MacroscopicityResult macroscopicity(const StateVector& state, const FockBasis& basis) {
  const int l = basis.sites();
  if (l > kMacroscopicitySiteCap) {
    throw CapacityError("macroscopicity: L = " + std::to_string(l) + " exceeds the exhaustive-search cap of " +
                        std::to_string(kMacroscopicitySiteCap));
  }
  RVector mean;
  RMatrix cov;
  site_moments(state, basis, mean, cov);

  MacroscopicityResult res;
  res.fisher = -1.0;
  const std::uint64_t count = std::uint64_t{1} << (l - 1);
  // bit i of mask set => w_{i+1} = +1; enumerating masks in increasing order
  // with site 2 as the most significant free bit gives lexicographic order
  RVector w(l);
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    w[0] = 1.0;
    for (int i = 1; i < l; ++i) w[i] = (mask >> (l - 1 - i)) & 1U ? 1.0 : -1.0;
    const double f = 4.0 * w.dot(cov * w);
    if (f > res.fisher + 1e-12) {
      res.fisher = f;
      res.argmax_w.assign(static_cast<std::size_t>(l), 1);
      for (int i = 0; i < l; ++i) res.argmax_w[static_cast<std::size_t>(i)] = static_cast<int>(w[i]);
    }
  }
  res.fisher = std::max(res.fisher, 0.0);
  res.n_eff = res.fisher / (4.0 * l);
  return res;
}

StateVector sample_haar_state(const CMatrix& subspace_basis, Rng& rng) {
  if (subspace_basis.cols() == 0) throw ValidationError("sample_haar_state: empty subspace basis");
  CVector c(subspace_basis.cols());
  for (Index k = 0; k < c.size(); ++k) c[k] = complex_gaussian(rng);
  return StateVector::normalized(subspace_basis * c);
}

CMatrix z_subspace_basis(const FockBasis& basis, std::optional<HalfInteger> z) {
  std::vector<Index> members;
  for (Index k = 0; k < basis.dim(); ++k) {
    if (!z || parity_imbalance(basis.state(k)) == *z) members.push_back(k);
  }
  if (members.empty()) throw ValidationError("z_subspace_basis: Z = " + z->str() + " is not attained");
  CMatrix out = CMatrix::Zero(basis.dim(), static_cast<Index>(members.size()));
  for (std::size_t i = 0; i < members.size(); ++i) out(members[i], static_cast<Index>(i)) = 1.0;
  return out;
}

SampleMean mean_macroscopicity(const FockBasis& basis, std::optional<HalfInteger> z, std::size_t n_samples,
                               std::uint64_t master_seed, int workers) {
  if (n_samples < 2) throw ValidationError("mean_macroscopicity: need at least 2 samples");
  const CMatrix sub = z_subspace_basis(basis, z);
  const std::vector<double> values = kernels::parallel_map(n_samples, workers, [&](std::size_t i) {
    Rng rng = make_rng(master_seed, i);
    return macroscopicity(sample_haar_state(sub, rng), basis).n_eff;
  });
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / static_cast<double>(n_samples);
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / static_cast<double>(n_samples - 1));
  return SampleMean{mean, sd / std::sqrt(static_cast<double>(n_samples)), n_samples};
}

std::map<HalfInteger, double> z_value_probabilities(const StateVector& state, const FockBasis& basis) {
  if (state.dim() != basis.dim()) throw ValidationError("z_value_probabilities: dimension mismatch");
  std::map<HalfInteger, double> out;
  for (Index k = 0; k < basis.dim(); ++k) out[parity_imbalance(basis.state(k))] += std::norm(state[k]);
  return out;
}

}  // namespace fumes
