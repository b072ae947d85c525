#pragma once

// Finite-dimensional stand-in for the complex Hilbert space H.
//
// Elements are coordinate vectors with respect to a fixed orthonormal basis,
// operators are dense d x d complex matrices. The inner product is linear in
// the first argument and conjugate-linear in the second, so that
// (x (x) y)(u) = x <u, y> and C_h(u) = E[X_h <u, X_0>] transcribe directly.

#include <complex>
#include <cstddef>
#include <span>

#include <Eigen/Dense>

namespace fts {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

class RngStream;

class FunctionVector {
 public:
  FunctionVector() = default;
  explicit FunctionVector(std::size_t dim) : coeffs_(CVector::Zero(static_cast<Eigen::Index>(dim))) {}
  explicit FunctionVector(CVector coeffs) : coeffs_(std::move(coeffs)) {}
  FunctionVector(std::initializer_list<Complex> coeffs);

  static FunctionVector zero(std::size_t dim) { return FunctionVector(dim); }
  /// k-th basis vector e_{k+1} (zero-based k).
  static FunctionVector basis(std::size_t dim, std::size_t k);
  static FunctionVector from_real(std::span<const double> values);

  std::size_t dim() const { return static_cast<std::size_t>(coeffs_.size()); }
  const CVector& coeffs() const { return coeffs_; }
  CVector& coeffs() { return coeffs_; }

  Complex operator[](std::size_t j) const { return coeffs_(static_cast<Eigen::Index>(j)); }
  Complex& operator[](std::size_t j) { return coeffs_(static_cast<Eigen::Index>(j)); }

  double norm() const { return coeffs_.norm(); }
  double squared_norm() const { return coeffs_.squaredNorm(); }
  /// Coordinatewise complex conjugate.
  FunctionVector conj() const { return FunctionVector(coeffs_.conjugate()); }

  FunctionVector& operator+=(const FunctionVector& other);
  FunctionVector& operator-=(const FunctionVector& other);
  FunctionVector& operator*=(Complex s) {
    coeffs_ *= s;
    return *this;
  }

  friend FunctionVector operator+(FunctionVector a, const FunctionVector& b) { return a += b; }
  friend FunctionVector operator-(FunctionVector a, const FunctionVector& b) { return a -= b; }
  friend FunctionVector operator*(Complex s, FunctionVector a) { return a *= s; }
  friend FunctionVector operator*(FunctionVector a, Complex s) { return a *= s; }

 private:
  CVector coeffs_;
};

class LinOperator {
 public:
  LinOperator() = default;
  explicit LinOperator(std::size_t dim)
      : entries_(CMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim))) {}
  /// Throws std::invalid_argument for non-square input.
  explicit LinOperator(CMatrix entries);

  static LinOperator zero(std::size_t dim) { return LinOperator(dim); }
  static LinOperator identity(std::size_t dim);
  static LinOperator diagonal(std::span<const double> diag);
  static LinOperator from_real(const Eigen::MatrixXd& m) { return LinOperator(CMatrix(m.cast<Complex>())); }

  std::size_t dim() const { return static_cast<std::size_t>(entries_.rows()); }
  const CMatrix& entries() const { return entries_; }
  Complex operator()(std::size_t row, std::size_t col) const {
    return entries_(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col));
  }

  LinOperator& operator+=(const LinOperator& other);
  LinOperator& operator-=(const LinOperator& other);
  LinOperator& operator*=(Complex s) {
    entries_ *= s;
    return *this;
  }

  friend LinOperator operator+(LinOperator a, const LinOperator& b) { return a += b; }
  friend LinOperator operator-(LinOperator a, const LinOperator& b) { return a -= b; }
  friend LinOperator operator*(Complex s, LinOperator a) { return a *= s; }
  friend LinOperator operator*(LinOperator a, Complex s) { return a *= s; }
  /// Composition (A * B)(u) = A(B(u)).
  friend LinOperator operator*(const LinOperator& a, const LinOperator& b);

  /// Entrywise complex conjugate (not the adjoint).
  LinOperator conj() const { return LinOperator(CMatrix(entries_.conjugate())); }

 private:
  CMatrix entries_;
};

Complex inner(const FunctionVector& x, const FunctionVector& y);

/// Rank-one operator (x (x) y)(u) = x <u, y>; entries x_j conj(y_k).
LinOperator tensor(const FunctionVector& x, const FunctionVector& y);

Complex trace(const LinOperator& a);
double hs_norm(const LinOperator& a);
LinOperator adjoint(const LinOperator& a);
FunctionVector apply(const LinOperator& a, const FunctionVector& x);

/// Largest singular value.
double op_norm(const LinOperator& a);

/// Eigenvalues of the Hermitian part (A + A*)/2, ascending.
Eigen::VectorXd hermitian_eigenvalues(const LinOperator& a);

bool is_nonneg_selfadjoint(const LinOperator& a, double tol);

/// Trace norm, defined only for self-adjoint non-negative operators.
double schatten1_norm(const LinOperator& a, double tol = 1e-10);

/// Factor L with L L* = Sigma from a clipped symmetric eigendecomposition.
///
/// Eigenvalues in [-tol * (1 + |Sigma|_HS), 0) are clipped to zero; anything
/// more negative raises NumericalError. Rank-deficient covariances are fine.
class GaussianFactor {
 public:
  static constexpr double kDefaultTol = 1e-10;

  explicit GaussianFactor(const LinOperator& covariance, double tol = kDefaultTol);

  std::size_t dim() const { return static_cast<std::size_t>(factor_.rows()); }
  const CMatrix& factor() const { return factor_; }

  /// factor * g for a caller-supplied coordinate vector g.
  FunctionVector map(const CVector& g) const { return FunctionVector(CVector(factor_ * g)); }

  FunctionVector sample_real(RngStream& rng) const;
  FunctionVector sample_complex(RngStream& rng) const;

 private:
  CMatrix factor_;
};

/// Draw from N_H(0, Sigma); coordinates are real when Sigma is real.
FunctionVector sample_real_gaussian(const LinOperator& covariance, RngStream& rng);

/// Draw from the circularly-symmetric CN_H(0, Gamma).
FunctionVector sample_complex_gaussian(const LinOperator& covariance, RngStream& rng);

}  // namespace fts
