#include "fts/hilbert.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "fts/error.hpp"
#include "fts/rng.hpp"

namespace fts {

namespace {

void require_same_dim(const char* what, std::size_t a, std::size_t b) {
  if (a != b) throw DimensionMismatch(what, a, b);
}

}  // namespace

FunctionVector::FunctionVector(std::initializer_list<Complex> coeffs)
    : coeffs_(static_cast<Eigen::Index>(coeffs.size())) {
  Eigen::Index j = 0;
  for (const Complex& c : coeffs) coeffs_(j++) = c;
}

FunctionVector FunctionVector::basis(std::size_t dim, std::size_t k) {
  if (k >= dim) throw std::out_of_range("basis index " + std::to_string(k) + " >= dim " + std::to_string(dim));
  FunctionVector e(dim);
  e[k] = 1.0;
  return e;
}

FunctionVector FunctionVector::from_real(std::span<const double> values) {
  FunctionVector x(values.size());
  for (std::size_t j = 0; j < values.size(); ++j) x[j] = values[j];
  return x;
}

FunctionVector& FunctionVector::operator+=(const FunctionVector& other) {
  require_same_dim("FunctionVector +", dim(), other.dim());
  coeffs_ += other.coeffs_;
  return *this;
}

FunctionVector& FunctionVector::operator-=(const FunctionVector& other) {
  require_same_dim("FunctionVector -", dim(), other.dim());
  coeffs_ -= other.coeffs_;
  return *this;
}

LinOperator::LinOperator(CMatrix entries) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols()) {
    throw std::invalid_argument("LinOperator requires a square matrix, got " + std::to_string(entries_.rows()) +
                                "x" + std::to_string(entries_.cols()));
  }
}

LinOperator LinOperator::identity(std::size_t dim) {
  const auto d = static_cast<Eigen::Index>(dim);
  return LinOperator(CMatrix(CMatrix::Identity(d, d)));
}

LinOperator LinOperator::diagonal(std::span<const double> diag) {
  LinOperator a(diag.size());
  for (std::size_t j = 0; j < diag.size(); ++j) {
    a.entries_(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j)) = diag[j];
  }
  return a;
}

LinOperator& LinOperator::operator+=(const LinOperator& other) {
  require_same_dim("LinOperator +", dim(), other.dim());
  entries_ += other.entries_;
  return *this;
}

LinOperator& LinOperator::operator-=(const LinOperator& other) {
  require_same_dim("LinOperator -", dim(), other.dim());
  entries_ -= other.entries_;
  return *this;
}

LinOperator operator*(const LinOperator& a, const LinOperator& b) {
  require_same_dim("LinOperator *", a.dim(), b.dim());
  return LinOperator(CMatrix(a.entries_ * b.entries_));
}

Complex inner(const FunctionVector& x, const FunctionVector& y) {
  require_same_dim("inner", x.dim(), y.dim());
  // Eigen's dot() conjugates its first argument.
  return y.coeffs().dot(x.coeffs());
}

LinOperator tensor(const FunctionVector& x, const FunctionVector& y) {
  require_same_dim("tensor", x.dim(), y.dim());
  return LinOperator(CMatrix(x.coeffs() * y.coeffs().adjoint()));
}

Complex trace(const LinOperator& a) { return a.entries().trace(); }

double hs_norm(const LinOperator& a) { return a.entries().norm(); }

LinOperator adjoint(const LinOperator& a) { return LinOperator(CMatrix(a.entries().adjoint())); }

FunctionVector apply(const LinOperator& a, const FunctionVector& x) {
  require_same_dim("apply", a.dim(), x.dim());
  return FunctionVector(CVector(a.entries() * x.coeffs()));
}

Eigen::VectorXd hermitian_eigenvalues(const LinOperator& a) {
  if (a.dim() == 0) return {};
  const CMatrix sym = 0.5 * (a.entries() + a.entries().adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(sym, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("hermitian eigenvalue iteration did not converge (dim " + std::to_string(a.dim()) + ")");
  }
  return solver.eigenvalues();
}

double op_norm(const LinOperator& a) {
  if (a.dim() == 0) return 0.0;
  const CMatrix gram = a.entries().adjoint() * a.entries();
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(gram, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("op_norm: eigenvalue iteration did not converge");
  return std::sqrt(std::max(0.0, solver.eigenvalues().maxCoeff()));
}

bool is_nonneg_selfadjoint(const LinOperator& a, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("is_nonneg_selfadjoint: tol must be > 0");
  if (a.dim() == 0) return true;
  const double scale = 1.0 + hs_norm(a);
  if ((a.entries() - a.entries().adjoint()).norm() > tol * scale) return false;
  return hermitian_eigenvalues(a).minCoeff() >= -tol * scale;
}

double schatten1_norm(const LinOperator& a, double tol) {
  if (!is_nonneg_selfadjoint(a, tol)) {
    throw std::invalid_argument("schatten1_norm is only provided for self-adjoint non-negative operators");
  }
  return trace(a).real();
}

GaussianFactor::GaussianFactor(const LinOperator& covariance, double tol) {
  const std::size_t d = covariance.dim();
  const double scale = 1.0 + hs_norm(covariance);
  const CMatrix& s = covariance.entries();
  if ((s - s.adjoint()).norm() > tol * scale) {
    throw NumericalError("covariance operator is not self-adjoint");
  }
  if (d == 0) return;

  const bool real = s.imag().norm() <= tol * scale;
  Eigen::VectorXd evals;
  CMatrix evecs;
  if (real) {
    // Real symmetric input keeps real eigenvectors, hence real samples.
    const Eigen::MatrixXd sym = 0.5 * (s.real() + s.real().transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym);
    if (solver.info() != Eigen::Success) throw NumericalError("covariance eigendecomposition did not converge");
    evals = solver.eigenvalues();
    evecs = solver.eigenvectors().cast<Complex>();
  } else {
    const CMatrix sym = 0.5 * (s + s.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(sym);
    if (solver.info() != Eigen::Success) throw NumericalError("covariance eigendecomposition did not converge");
    evals = solver.eigenvalues();
    evecs = solver.eigenvectors();
  }
  if (evals.minCoeff() < -tol * scale) {
    throw NumericalError("covariance operator has negative eigenvalue " + std::to_string(evals.minCoeff()));
  }
  const Eigen::VectorXd root = evals.cwiseMax(0.0).cwiseSqrt();
  factor_ = evecs * root.cast<Complex>().asDiagonal();
}

FunctionVector GaussianFactor::sample_real(RngStream& rng) const {
  CVector g(factor_.cols());
  for (Eigen::Index j = 0; j < g.size(); ++j) g(j) = rng.normal();
  return map(g);
}

FunctionVector GaussianFactor::sample_complex(RngStream& rng) const {
  static const double kHalfRoot = std::sqrt(0.5);
  CVector g(factor_.cols());
  for (Eigen::Index j = 0; j < g.size(); ++j) {
    const double re = rng.normal();
    const double im = rng.normal();
    g(j) = Complex(kHalfRoot * re, kHalfRoot * im);
  }
  return map(g);
}

FunctionVector sample_real_gaussian(const LinOperator& covariance, RngStream& rng) {
  const double scale = 1.0 + hs_norm(covariance);
  if (covariance.entries().imag().norm() > GaussianFactor::kDefaultTol * scale) {
    throw std::invalid_argument("sample_real_gaussian requires a real covariance operator");
  }
  return GaussianFactor(covariance).sample_real(rng);
}

FunctionVector sample_complex_gaussian(const LinOperator& covariance, RngStream& rng) {
  return GaussianFactor(covariance).sample_complex(rng);
}

}  // namespace fts
