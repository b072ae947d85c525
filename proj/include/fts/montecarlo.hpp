#pragma once

// Seeded replication harness for the limit law of S_n(theta) / sqrt(n).
//
// Replication r (1 <= r <= R) simulates its path from RngStream(seed, r);
// stream id 0 is reserved for auxiliary draws (random test vectors, pilot
// paths). Per-replication results land in indexed slots and are reduced in
// a fixed pairwise order, so reports are bit-identical for any thread count.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fts/hilbert.hpp"
#include "fts/models.hpp"
#include "fts/spectral.hpp"

namespace fts {

struct MonteCarloOptions {
  std::uint64_t seed = 42;
  std::size_t threads = 1;
  /// Path length and lag count for the monte-carlo reference provenance.
  std::size_t pilot_length = 1 << 16;
  std::size_t pilot_lags = 20;
};

struct NormalityDiagnostics {
  std::size_t count = 0;
  double standardized_mean = 0.0;  // mean / sqrt(reference_variance / N)
  double variance_ratio = 0.0;     // sample variance / reference_variance
  double skewness = 0.0;
  double excess_kurtosis = 0.0;
  double ks = 0.0;                 // sup distance to N(0, reference_variance)
  bool degenerate = false;         // sample variance is zero
};

/// Raw distances, no p-values. Requires >= 100 samples and a positive
/// reference variance.
NormalityDiagnostics normality_diagnostics(std::span<const double> samples, double reference_variance);

struct NormalityThresholds {
  double variance_ratio_low = 0.9;
  double variance_ratio_high = 1.1;
  double max_abs_excess_kurtosis = 0.3;
  double max_ks = 0.035;
};

bool within(const NormalityDiagnostics& diag, const NormalityThresholds& thresholds);

struct ProjectionStats {
  FunctionVector u;
  /// Limit variance of Re<S/sqrt(n), u>: <Gamma u, u> / 2 in complex mode,
  /// <Gamma u, u> in real mode, where Gamma is the reference operator.
  double reference_variance = 0.0;
  double var_re = 0.0;
  double var_im = 0.0;
  double corr_re_im = 0.0;
  double skewness_re = 0.0;
  double excess_kurtosis_re = 0.0;
  /// Diagnostics against the reference law; empty when the reference
  /// variance is zero.
  std::optional<NormalityDiagnostics> re;
  std::optional<NormalityDiagnostics> im;
};

struct CltReport {
  std::string model_id;
  double theta = 0.0;
  std::size_t n = 0;
  std::size_t replications = 0;
  /// theta in {0, -pi, pi}: S_n is real and the limit is a real Gaussian.
  bool real_mode = false;
  std::string mode_note;
  LinOperator gamma_hat;     // mean of (S/sqrt(n)) (x) (S/sqrt(n))
  LinOperator relation_hat;  // mean of s_j s_k, no conjugate
  double trace_mean = 0.0;   // mean of |S|^2 / n
  double trace_se = 0.0;
  LinOperator reference;     // 2 pi F_theta
  std::string reference_provenance;
  /// 2 pi F_{n;theta}, the exact finite-n mean of gamma_hat, when lag
  /// covariances are known in closed form.
  std::optional<LinOperator> finite_n_reference;
  std::vector<ProjectionStats> projections;
};

struct CrossFreqReport {
  std::string model_id;
  double theta = 0.0;
  double theta_prime = 0.0;
  std::size_t n = 0;
  std::size_t replications = 0;
  LinOperator cross_cov;  // mean of (S(theta)/sqrt(n)) (x) (S(theta')/sqrt(n))
  LinOperator gamma_theta;
  LinOperator gamma_theta_prime;
  /// |cross_cov|_HS / sqrt(|gamma_theta|_HS |gamma_theta_prime|_HS).
  double normalized_cross_hs = 0.0;
  /// Per test vector: E[a conj(b)] / sqrt(E|a|^2 E|b|^2) with a, b the projections.
  std::vector<Complex> projection_corr;
};

/// e_1, the normalised all-ones vector and one seeded random unit vector.
std::vector<FunctionVector> default_test_vectors(std::size_t dim, std::uint64_t seed);

/// 2 pi F_theta for the model from the requested construction. Fejer uses
/// path length n. Throws std::invalid_argument when the construction is not
/// available for the model class.
LinOperator reference_operator(const ProcessModel& model, double theta, Provenance provenance, std::size_t n,
                               const MonteCarloOptions& options);

bool is_real_frequency(double theta);

CltReport run_clt(const ProcessModel& model, double theta, std::size_t n, std::size_t replications,
                  const std::vector<FunctionVector>& u_list, Provenance provenance, const MonteCarloOptions& options);

/// theta = 0: (X_1 + ... + X_n) / sqrt(n) against N(0, T) with T = 2 pi F_0.
CltReport run_theta0(const ProcessModel& model, std::size_t n, std::size_t replications,
                     const std::vector<FunctionVector>& u_list, Provenance provenance,
                     const MonteCarloOptions& options);

/// Both frequencies must lie on the Fourier grid 2 pi j / n and differ.
CrossFreqReport run_cross_freq(const ProcessModel& model, double theta, double theta_prime, std::size_t n,
                               std::size_t replications, const std::vector<FunctionVector>& u_list,
                               const MonteCarloOptions& options);

/// KS distance of Re<S_n/sqrt(n), u> against its limit law for each n.
std::vector<double> ks_profile(const ProcessModel& model, double theta, const std::vector<std::size_t>& ns,
                               std::size_t replications, const FunctionVector& u, Provenance provenance,
                               const MonteCarloOptions& options);

}  // namespace fts
