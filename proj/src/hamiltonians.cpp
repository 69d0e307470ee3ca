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

#include "fumes/hamiltonians.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "fumes/errors.hpp"

namespace fumes {

std::string to_string(const Occupation& n) {
  std::ostringstream out;
  out << '(';
  for (std::size_t j = 0; j < n.size(); ++j) out << (j ? "," : "") << n[j];
  out << ')';
  return out.str();
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
    if (r > std::numeric_limits<std::uint64_t>::max()) return std::numeric_limits<std::uint64_t>::max();
  }
  return static_cast<std::uint64_t>(r);
}

namespace {

// Recursively fill sites left to right, largest occupation first.
void fill_descending(Occupation& prefix, int remaining, int site, int n_sites, std::vector<Occupation>& out) {
  if (site == n_sites - 1) {
    prefix[site] = remaining;
    out.push_back(prefix);
    return;
  }
  for (int n = remaining; n >= 0; --n) {
    prefix[site] = n;
    fill_descending(prefix, remaining - n, site + 1, n_sites, out);
  }
}

}  // namespace

FockBasis::FockBasis(int n_bosons, int n_sites, std::uint64_t dimension_cap)
    : n_bosons_(n_bosons), n_sites_(n_sites) {
  if (n_bosons < 0) throw ValidationError("FockBasis: boson count must be >= 0");
  if (n_sites < 1) throw ValidationError("FockBasis: site count must be >= 1");
  const std::uint64_t dim = binomial(static_cast<std::uint64_t>(n_bosons + n_sites - 1),
                                     static_cast<std::uint64_t>(n_bosons));
  if (dim > dimension_cap) {
    std::ostringstream msg;
    msg << "FockBasis: N=" << n_bosons << ", L=" << n_sites << " needs dimension " << dim
        << ", above the cap of " << dimension_cap;
    throw CapacityError(msg.str());
  }
  states_.reserve(dim);
  Occupation scratch(static_cast<std::size_t>(n_sites), 0);
  fill_descending(scratch, n_bosons, 0, n_sites, states_);
  for (std::size_t i = 0; i < states_.size(); ++i) index_.emplace(states_[i], static_cast<Index>(i));
}

Index FockBasis::index_of(const Occupation& n) const {
  auto it = index_.find(n);
  if (it == index_.end()) {
    throw ValidationError("FockBasis: " + to_string(n) + " is not a state of the N=" + std::to_string(n_bosons_) +
                          ", L=" + std::to_string(n_sites_) + " basis");
  }
  return it->second;
}

StateVector FockBasis::fock_state(const Occupation& n) const {
  return StateVector::basis_state(dim(), index_of(n));
}

FockBasis enumerate_fock_basis(int n_bosons, int n_sites, std::uint64_t dimension_cap) {
  return FockBasis(n_bosons, n_sites, dimension_cap);
}

void BoseHubbardParams::validate() const {
  if (!(J >= 0.0) || !(U >= 0.0)) throw ValidationError("BoseHubbardParams: J and U must be >= 0");
  if (J == 0.0 && U == 0.0) throw ValidationError("BoseHubbardParams: J and U cannot both be zero");
  if (L < 1) throw ValidationError("BoseHubbardParams: L must be >= 1");
  if (N < 0) throw ValidationError("BoseHubbardParams: N must be >= 0");
}

HermitianOperator build_bose_hubbard(const FockBasis& basis, const BoseHubbardParams& p) {
  p.validate();
  if (basis.sites() != p.L || basis.bosons() != p.N) {
    throw ValidationError("build_bose_hubbard: basis (N=" + std::to_string(basis.bosons()) +
                          ", L=" + std::to_string(basis.sites()) + ") does not match parameters");
  }
  const Index d = basis.dim();
  CMatrix h = CMatrix::Zero(d, d);
  Occupation moved;
  for (Index col = 0; col < d; ++col) {
    const Occupation& n = basis.state(col);
    double onsite = 0.0;
    for (int nj : n) onsite += nj * (nj - 1);
    h(col, col) = 0.5 * p.U * onsite;
    if (p.J == 0.0) continue;
    // a_j^+ a_{j+1}: move one boson from j+1 to j. The adjoint term is filled
    // from the other column, so H is symmetric by construction.
    for (int j = 0; j + 1 < p.L; ++j) {
      if (n[j + 1] == 0) continue;
      moved = n;
      moved[j] += 1;
      moved[j + 1] -= 1;
      const Index row = basis.index_of(moved);
      const double amp = -p.J * std::sqrt(static_cast<double>(n[j + 1]) * (n[j] + 1));
      h(row, col) = amp;
      h(col, row) = amp;
    }
  }
  return HermitianOperator(std::move(h));
}

HermitianOperator sample_gue(Index d, Rng& rng) {
  if (d < 2) throw ValidationError("sample_gue: dimension must be >= 2");
  std::normal_distribution<double> normal(0.0, 1.0);
  CMatrix h(d, d);
  for (Index j = 0; j < d; ++j) {
    h(j, j) = normal(rng);
    for (Index k = j + 1; k < d; ++k) {
      const Complex z = complex_gaussian(rng);
      h(j, k) = z;
      h(k, j) = std::conj(z);
    }
  }
  return HermitianOperator(std::move(h));
}

StateVector ground_state(const SpectralDecomposition& spec, double degeneracy_tolerance) {
  if (spec.dim() > 1) {
    const double gap = spec.eigenvalues()[1] - spec.eigenvalues()[0];
    if (gap <= degeneracy_tolerance) {
      std::ostringstream msg;
      msg << "ground_state: lowest level is degenerate (gap " << gap << ")";
      throw AmbiguityError(msg.str());
    }
  }
  return spec.eigenstate(0);
}

bool is_pathological_target(const SpectralDecomposition& spec, const StateVector& target, Index d) {
  const CVector c = spec.to_eigenbasis(target);
  const double threshold = std::pow(0.1, static_cast<double>(d));
  for (Index m = 0; m < c.size(); ++m) {
    if (std::norm(c[m]) <= threshold) return true;
  }
  return false;
}

}  // namespace fumes
