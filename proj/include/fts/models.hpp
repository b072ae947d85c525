#pragma once

// Simulable stationary process classes: linear processes in i.i.d. noise,
// linear processes driven by a (finite-order) linear error process, and a
// coordinatewise functional ARCH recursion.

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "fts/hilbert.hpp"
#include "fts/rng.hpp"

namespace fts {

enum class InnovationLaw { Gaussian, ScaledUniform, ScaledRademacher };

std::string_view to_string(InnovationLaw law);
InnovationLaw parse_innovation_law(std::string_view name);

/// I.i.d. mean-zero innovations with covariance V. Every law is realised as
/// L g with L L* = V and g having independent unit-variance coordinates, so
/// the second-order structure is identical across laws.
class InnovationSpec {
 public:
  InnovationSpec(LinOperator covariance, InnovationLaw law = InnovationLaw::Gaussian);

  static InnovationSpec standard(std::size_t dim, InnovationLaw law = InnovationLaw::Gaussian) {
    return InnovationSpec(LinOperator::identity(dim), law);
  }

  std::size_t dim() const { return covariance_.dim(); }
  const LinOperator& covariance() const { return covariance_; }
  InnovationLaw law() const { return law_; }

  FunctionVector draw(RngStream& rng) const;

 private:
  LinOperator covariance_;
  InnovationLaw law_;
  GaussianFactor factor_;
};

/// X_t = sum_{k=0}^{K} Psi_k(eps_{t-k}).
class LinearModel {
 public:
  LinearModel(std::vector<LinOperator> psi, InnovationSpec innovations);

  static LinearModel white_noise(InnovationSpec innovations);
  /// Psi_k = rho^k * base, truncated once the operator-norm tail drops below tail_tol.
  static LinearModel geometric(const LinOperator& base, double rho, InnovationSpec innovations,
                               double tail_tol = 1e-12);

  std::size_t dim() const { return innovations_.dim(); }
  /// Truncation order K (psi holds K + 1 coefficients).
  std::size_t order() const { return psi_.size() - 1; }
  const std::vector<LinOperator>& psi() const { return psi_; }
  const LinOperator& psi(std::size_t k) const { return psi_.at(k); }
  const InnovationSpec& innovations() const { return innovations_; }
  /// kappa = sum_k |Psi_k|_op.
  double kappa() const { return kappa_; }

 private:
  std::vector<LinOperator> psi_;
  InnovationSpec innovations_;
  double kappa_ = 0.0;
};

/// X_t = sum_k Psi_k(eps_{t-k}) where eps itself is a linear process in i.i.d. noise.
class DependentErrorLinearModel {
 public:
  DependentErrorLinearModel(std::vector<LinOperator> psi, LinearModel error_driver);

  std::size_t dim() const { return driver_.dim(); }
  std::size_t order() const { return psi_.size() - 1; }
  const std::vector<LinOperator>& psi() const { return psi_; }
  const LinearModel& error_driver() const { return driver_; }
  double kappa() const { return kappa_; }

  /// The same process written as one linear filter of the driver's i.i.d.
  /// noise: coefficients are the convolution of psi with the driver's psi.
  LinearModel as_iid_linear() const;

 private:
  std::vector<LinOperator> psi_;
  LinearModel driver_;
  double kappa_ = 0.0;
};

/// Coordinatewise functional ARCH(1) on a grid basis:
///   X_t = eps_t (.) sigma_t,  sigma_t^2 = delta + beta(X_{t-1}^2).
class ArchModel {
 public:
  static constexpr std::size_t kDefaultBurnIn = 500;

  /// Throws NumericalError when |beta|_op * max_j E eps_j^2 >= 1.
  ArchModel(Eigen::VectorXd delta, Eigen::MatrixXd beta, InnovationSpec innovations,
            std::size_t burn_in = kDefaultBurnIn);

  std::size_t dim() const { return innovations_.dim(); }
  const Eigen::VectorXd& delta() const { return delta_; }
  const Eigen::MatrixXd& beta() const { return beta_; }
  const InnovationSpec& innovations() const { return innovations_; }
  std::size_t burn_in() const { return burn_in_; }
  double contraction_factor() const { return contraction_; }
  /// Stationary mean of sigma_t^2: (I - beta diag(E eps^2))^{-1} delta.
  const Eigen::VectorXd& stationary_sigma2() const { return sigma2_mean_; }

  /// Advance one step: returns X_t and overwrites sigma2 with sigma_{t+1}^2.
  Eigen::VectorXd step(Eigen::VectorXd& sigma2, const Eigen::VectorXd& eps) const;

 private:
  Eigen::VectorXd delta_;
  Eigen::MatrixXd beta_;
  InnovationSpec innovations_;
  std::size_t burn_in_;
  double contraction_ = 0.0;
  Eigen::VectorXd sigma2_mean_;
};

using ProcessModel = std::variant<LinearModel, DependentErrorLinearModel, ArchModel>;

std::size_t model_dim(const ProcessModel& model);
std::string describe(const ProcessModel& model);

struct SamplePath {
  std::vector<FunctionVector> observations;  // X_1 .. X_n
  std::string model_id;
  std::size_t burn_in = 0;

  std::size_t size() const { return observations.size(); }
  std::size_t dim() const { return observations.empty() ? 0 : observations.front().dim(); }
  /// X_t with the 1-based time index used throughout.
  const FunctionVector& at(std::size_t t) const { return observations.at(t - 1); }
};

/// A linear-model path that keeps the innovations it was built from.
struct LinearPathWithInnovations {
  SamplePath path;
  /// eps_{1-K} .. eps_n.
  std::vector<FunctionVector> innovations;
  std::size_t order = 0;

  /// eps_s for 1 - K <= s <= n.
  const FunctionVector& innovation(long s) const;
};

SamplePath simulate(const ProcessModel& model, std::size_t n, RngStream& rng);
LinearPathWithInnovations simulate_with_innovations(const LinearModel& model, std::size_t n, RngStream& rng);

/// Exact lag-h covariance C_h = E[X_h (x) X_0] of the truncated model.
LinOperator theoretical_cov(const LinearModel& model, long h);
LinOperator theoretical_cov(const DependentErrorLinearModel& model, long h);

struct CoupledPair {
  FunctionVector original;  // X_0
  FunctionVector coupled;   // X_0^{(m)}
};

/// One draw of (X_0, X_0^{(m)}): both share eps_0 .. eps_{-m+1}, the rest of
/// X_0^{(m)} comes from an independent copy. Requires m >= 1.
CoupledPair couple_m_approximation(const LinearModel& model, std::size_t m, RngStream& rng);
CoupledPair couple_m_approximation(const ArchModel& model, std::size_t m, RngStream& rng);

/// Deterministic linear coupling from explicit innovations: eps[k] = eps_{-k}
/// and eps_copy[k] = tilde-eps_{-k}, both of length K + 1. Entries of eps_copy
/// below m are ignored.
CoupledPair couple_linear(const LinearModel& model, std::size_t m, std::span<const FunctionVector> eps,
                          std::span<const FunctionVector> eps_copy);

namespace detail {
// Same as the public overloads but also admits m = 0 (fully independent copy).
CoupledPair couple_unchecked(const LinearModel& model, std::size_t m, RngStream& rng);
CoupledPair couple_unchecked(const ArchModel& model, std::size_t m, RngStream& rng);
}  // namespace detail

/// Reads a whitespace- or comma-separated real matrix, rows = time, columns =
/// basis coordinates.
SamplePath read_path_matrix(const std::string& path);

}  // namespace fts
