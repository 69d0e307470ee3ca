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

// Dense pure-state quantum mechanics: states, Hermitian operators, spectral
// decomposition and unitary propagation. Units: hbar = 1, so times carry
// inverse energy units.

#pragma once

#include <complex>

#include <Eigen/Dense>

namespace fumes {

using Complex = std::complex<double>;
using Index = Eigen::Index;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;
using RMatrix = Eigen::MatrixXd;

inline constexpr double kNormTolerance = 1e-10;
inline constexpr double kHermitianTolerance = 1e-12;

/// Normalized complex amplitudes over a fixed ordered basis.
class StateVector {
 public:
  /// Throws ValidationError unless the norm is 1 within kNormTolerance.
  explicit StateVector(CVector amplitudes);

  /// Rescales to unit norm. Throws ValidationError on a zero vector.
  static StateVector normalized(CVector raw);
  static StateVector basis_state(Index dim, Index k);

  Index dim() const { return amplitudes_.size(); }
  const CVector& amplitudes() const { return amplitudes_; }
  Complex operator[](Index i) const { return amplitudes_[i]; }

 private:
  struct Unchecked {};
  StateVector(CVector amplitudes, Unchecked) : amplitudes_(std::move(amplitudes)) {}
  friend class SpectralDecomposition;

  CVector amplitudes_;
};

class HermitianOperator {
 public:
  /// Throws ValidationError if the matrix is not square or not Hermitian
  /// within kHermitianTolerance.
  explicit HermitianOperator(CMatrix entries);

  static HermitianOperator identity(Index dim);
  static HermitianOperator diagonal(const RVector& diag);
  /// |s><s|
  static HermitianOperator projector(const StateVector& s);

  Index dim() const { return entries_.rows(); }
  const CMatrix& matrix() const { return entries_; }

 private:
  CMatrix entries_;
};

/// Eigenvalues in ascending order and the unitary whose columns are the
/// matching eigenvectors. Immutable; safe to share between threads.
class SpectralDecomposition {
 public:
  SpectralDecomposition(RVector eigenvalues, CMatrix eigenvectors);

  Index dim() const { return eigenvalues_.size(); }
  const RVector& eigenvalues() const { return eigenvalues_; }
  const CMatrix& eigenvectors() const { return eigenvectors_; }

  StateVector eigenstate(Index k) const;
  /// Coefficients of `state` in the eigenbasis, V^dagger |state>.
  CVector to_eigenbasis(const StateVector& state) const;
  /// V diag(E) V^dagger.
  CMatrix reconstruct() const;
  double bandwidth() const { return eigenvalues_[dim() - 1] - eigenvalues_[0]; }

 private:
  RVector eigenvalues_;
  CMatrix eigenvectors_;
};

SpectralDecomposition eigendecompose(const HermitianOperator& h);

/// exp(-i H t) |state>.
StateVector evolve(const SpectralDecomposition& spec, const StateVector& state, double t);

/// <a|b>
Complex overlap(const StateVector& a, const StateVector& b);

/// <s|A|s>; throws NumericalError if the imaginary residue exceeds 1e-10.
double expectation(const HermitianOperator& a, const StateVector& s);

}  // namespace fumes
