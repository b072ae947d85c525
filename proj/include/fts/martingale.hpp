#pragma once

// Martingale projections P_k = E[.|G_k] - E[.|G_{k-1}] for processes driven
// by i.i.d. innovations, with G_k = sigma(eps_k, eps_{k-1}, ...).
//
// Two index conventions coexist and are kept as-is:
//   Z_n(theta)  sums t = 0..n   (P_0(X_t) terms)
//   S_n(theta)  sums t = 1..n, and its decomposition sums k = 1..n.
// For linear models every conditional expectation is an exact finite sum
// over retained innovations.

#include <cstddef>
#include <vector>

#include "fts/hilbert.hpp"
#include "fts/models.hpp"
#include "fts/rng.hpp"
#include "fts/stats.hpp"

namespace fts {

struct ProjectionSeries {
  double theta = 0.0;
  /// P_0(X_t) exp(-i t theta), t = 0..n.
  std::vector<FunctionVector> terms;
  /// partial_sums[m] = Z_m(theta) = (1 / sqrt(2 pi)) sum_{t<=m} terms[t].
  std::vector<FunctionVector> partial_sums;
};

/// P_0(X_t) = Psi_t(eps0); zero past the truncation order. Throws
/// std::out_of_range for t < 0.
FunctionVector p0_linear(const LinearModel& model, long t, const FunctionVector& eps0);

ProjectionSeries projection_series(const LinearModel& model, double theta, std::size_t n, const FunctionVector& eps0);

/// Z_n(theta) = (1 / sqrt(2 pi)) sum_{t=0}^n P_0(X_t) exp(-i t theta).
FunctionVector z_n(const LinearModel& model, double theta, std::size_t n, const FunctionVector& eps0);

/// Var(Z(theta)) for the limit Z = lim Z_n. Computed independently of the
/// spectral module, it must agree with spectral_density_closed.
LinOperator z_limit_variance(const LinearModel& model, double theta);

struct A3Report {
  /// nu_2(P_0(X_t)) for t = 0..T (ARCH: the dominating 2 nu_2(X_0 - X_0^{(t)})).
  std::vector<double> terms;
  double partial_sum = 0.0;
  GeometricFit decay;
  bool exact = true;
  std::size_t replications = 0;
};

A3Report a3_sum(const LinearModel& model, std::size_t horizon);
A3Report a3_sum(const DependentErrorLinearModel& model, std::size_t horizon);
A3Report a3_sum(const ArchModel& model, std::size_t horizon, const RngStream& rng, std::size_t replications,
                std::size_t threads = 1);
A3Report a3_sum(const ProcessModel& model, std::size_t horizon, const RngStream& rng, std::size_t replications,
                std::size_t threads = 1);

struct CouplingDecay {
  std::vector<std::size_t> lags;
  /// Estimated nu_2(X_0 - X_0^{(m)}) at each lag.
  std::vector<double> nu2;
  GeometricFit fit;
  std::size_t replications = 0;
};

/// nu_2(X_0 - X_0^{(m)}) for m = first..last from R coupled draws. Replication
/// r at lag m uses its own stream derived from (rng, m, r).
CouplingDecay coupling_decay(const ProcessModel& model, std::size_t first, std::size_t last, const RngStream& rng,
                             std::size_t replications, std::size_t threads = 1);

struct DecompositionReport {
  double theta = 0.0;
  std::size_t n = 0;
  FunctionVector dft;              // S_n(theta), summed directly
  FunctionVector martingale_part;  // sqrt(2 pi) sum_k Z^{(k)}_{n-k}(theta) exp(-i k theta)
  FunctionVector conditional_part; // E[S_n(theta) | G_0]
  double relative_error = 0.0;
  double conditional_norm_sq_over_n = 0.0;
};

DecompositionReport decomposition_check(const LinearModel& model, double theta, std::size_t n, RngStream& rng);

/// Both sides of the decomposition from an already simulated path.
DecompositionReport decompose(const LinearModel& model, const LinearPathWithInnovations& sim, double theta);

/// Mean of |E[S_n(theta) | G_0]|^2 / n over R paths for each n. Replication r
/// uses stream id r + 1 for every n.
std::vector<double> a2_profile(const LinearModel& model, double theta, const std::vector<std::size_t>& ns,
                               const RngStream& rng, std::size_t replications, std::size_t threads = 1);

}  // namespace fts
