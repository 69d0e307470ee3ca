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

#include "fumes/core.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "fumes/errors.hpp"

namespace fumes {

namespace {

void require_same_dim(Index a, Index b, const char* what) {
  if (a != b) {
    std::ostringstream msg;
    msg << what << ": dimension mismatch (" << a << " vs " << b << ")";
    throw ValidationError(msg.str());
  }
}

}  // namespace

StateVector::StateVector(CVector amplitudes) : amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() == 0) throw ValidationError("StateVector: empty amplitude list");
  const double norm = amplitudes_.norm();
  if (!(std::abs(norm - 1.0) <= kNormTolerance)) {
    std::ostringstream msg;
    msg << "StateVector: norm " << norm << " is not 1";
    throw ValidationError(msg.str());
  }
}

StateVector StateVector::normalized(CVector raw) {
  const double norm = raw.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw ValidationError("StateVector::normalized: zero or non-finite vector");
  }
  raw /= norm;
  return StateVector(std::move(raw), Unchecked{});
}

StateVector StateVector::basis_state(Index dim, Index k) {
  if (dim <= 0 || k < 0 || k >= dim) throw ValidationError("StateVector::basis_state: index out of range");
  CVector v = CVector::Zero(dim);
  v[k] = 1.0;
  return StateVector(std::move(v), Unchecked{});
}

HermitianOperator::HermitianOperator(CMatrix entries) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols() || entries_.rows() == 0) {
    throw ValidationError("HermitianOperator: matrix must be square and nonempty");
  }
  const double residual = (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
  if (!(residual <= kHermitianTolerance)) {
    std::ostringstream msg;
    msg << "HermitianOperator: Hermiticity residual " << residual;
    throw ValidationError(msg.str());
  }
}

HermitianOperator HermitianOperator::identity(Index dim) {
  return HermitianOperator(CMatrix::Identity(dim, dim));
}

HermitianOperator HermitianOperator::diagonal(const RVector& diag) {
  return HermitianOperator(diag.cast<Complex>().asDiagonal().toDenseMatrix());
}

HermitianOperator HermitianOperator::projector(const StateVector& s) {
  CMatrix p = s.amplitudes() * s.amplitudes().adjoint();
  // outer products are Hermitian only up to rounding of conj(a)*b vs a*conj(b)
  p = 0.5 * (p + p.adjoint()).eval();
  return HermitianOperator(std::move(p));
}

SpectralDecomposition::SpectralDecomposition(RVector eigenvalues, CMatrix eigenvectors)
    : eigenvalues_(std::move(eigenvalues)), eigenvectors_(std::move(eigenvectors)) {
  if (eigenvectors_.rows() != eigenvalues_.size() || eigenvectors_.cols() != eigenvalues_.size()) {
    throw ValidationError("SpectralDecomposition: eigenvector matrix does not match eigenvalue count");
  }
  for (Index k = 1; k < eigenvalues_.size(); ++k) {
    if (eigenvalues_[k] < eigenvalues_[k - 1]) {
      throw ValidationError("SpectralDecomposition: eigenvalues must be nondecreasing");
    }
  }
}

StateVector SpectralDecomposition::eigenstate(Index k) const {
  return StateVector(eigenvectors_.col(k), StateVector::Unchecked{});
}

CVector SpectralDecomposition::to_eigenbasis(const StateVector& state) const {
  require_same_dim(dim(), state.dim(), "to_eigenbasis");
  return eigenvectors_.adjoint() * state.amplitudes();
}

CMatrix SpectralDecomposition::reconstruct() const {
  return eigenvectors_ * eigenvalues_.cast<Complex>().asDiagonal() * eigenvectors_.adjoint();
}

SpectralDecomposition eigendecompose(const HermitianOperator& h) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(h.matrix());
  if (solver.info() != Eigen::Success) {
    std::ostringstream msg;
    msg << "eigendecompose: solver did not converge for dim " << h.dim()
        << " (max |entry| = " << h.matrix().cwiseAbs().maxCoeff() << ")";
    throw NumericalError(msg.str());
  }
  return SpectralDecomposition(solver.eigenvalues(), solver.eigenvectors());
}

StateVector evolve(const SpectralDecomposition& spec, const StateVector& state, double t) {
  require_same_dim(spec.dim(), state.dim(), "evolve");
  if (t == 0.0) return state;
  CVector c = spec.to_eigenbasis(state);
  const RVector& e = spec.eigenvalues();
  for (Index k = 0; k < c.size(); ++k) c[k] *= std::polar(1.0, -e[k] * t);
  return StateVector::normalized(spec.eigenvectors() * c);
}

Complex overlap(const StateVector& a, const StateVector& b) {
  require_same_dim(a.dim(), b.dim(), "overlap");
  return a.amplitudes().dot(b.amplitudes());
}

double expectation(const HermitianOperator& a, const StateVector& s) {
  require_same_dim(a.dim(), s.dim(), "expectation");
  const Complex v = s.amplitudes().dot(a.matrix() * s.amplitudes());
  if (std::abs(v.imag()) > 1e-10) {
    throw NumericalError("expectation: imaginary residue " + std::to_string(v.imag()));
  }
  return v.real();
}

}  // namespace fumes
