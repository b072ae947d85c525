#pragma once

// Spectral density operators F_theta, materialised three ways:
//   closed form   (1/2pi) Psi(theta) V Psi(theta)*           linear models
//   lag sum       (1/2pi) sum_{|h|<=H} C_h exp(-i h theta)
//   Fejer         (1/2pi) sum_{|h|<n} (1 - |h|/n) C_h exp(-i h theta)
// plus lag-covariance estimation and the inverse relation
//   C_h = int_{-pi}^{pi} F_theta exp(i h theta) d theta.

#include <cstddef>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "fts/hilbert.hpp"
#include "fts/models.hpp"

namespace fts {

enum class Provenance { ClosedForm, LagSum, Fejer, MonteCarlo };

std::string to_string(Provenance p);
Provenance parse_provenance(const std::string& name);

/// Lag-covariance operators keyed by lag; expected on a symmetric range
/// -H..H with C_{-h} = C_h*.
using LagCovariances = std::map<long, LinOperator>;

struct SpectralEstimate {
  std::vector<double> frequencies;
  std::vector<LinOperator> operators;
  Provenance provenance = Provenance::ClosedForm;
  std::size_t fejer_n = 0;       // Fejer only
  std::size_t mc_replications = 0;  // MonteCarlo only
  std::size_t mc_n = 0;             // MonteCarlo only

  std::size_t size() const { return frequencies.size(); }
  std::size_t dim() const { return operators.empty() ? 0 : operators.front().dim(); }
  /// "closed-form", "lag-sum", "fejer(n)" or "monte-carlo(R,n)".
  std::string provenance_label() const;
};

LinOperator transfer_function(const LinearModel& model, double theta);
/// Transfer function of the outer filter only (the driver enters through V).
LinOperator transfer_function(const DependentErrorLinearModel& model, double theta);

LinOperator spectral_density_closed(const LinearModel& model, double theta);
LinOperator spectral_density_closed(const DependentErrorLinearModel& model, double theta);

/// Throws std::invalid_argument unless the lags are exactly -H..H with
/// C_{-h} = C_h* (relative tolerance 1e-12).
void validate_lag_covariances(const LagCovariances& covs);
/// H of a validated symmetric lag range.
std::size_t max_lag(const LagCovariances& covs);

LinOperator spectral_density_lagsum(const LagCovariances& covs, double theta);
/// Lags beyond H are taken as zero.
LinOperator fejer_spectral(const LagCovariances& covs, std::size_t n, double theta);
/// (1 / (2 pi n)) sum_{|h|<=H} |h| |C_h|_HS, bounding |fejer - lagsum|_HS.
double fejer_error_bound(const LagCovariances& covs, std::size_t n);

/// (1/n) sum_{t=1}^{n-h} X_{t+h} (x) X_t for h >= 0, adjoint for h < 0.
LinOperator empirical_cov(const SamplePath& path, long h);
LagCovariances empirical_covariances(const SamplePath& path, std::size_t max_lag);
LagCovariances model_covariances(const LinearModel& model, std::size_t max_lag);
LagCovariances model_covariances(const DependentErrorLinearModel& model, std::size_t max_lag);

/// Uniform periodic grid -pi + 2 pi g / G, g = 0 .. G-1.
std::vector<double> periodic_grid(std::size_t grid_size);

SpectralEstimate closed_form_estimate(const LinearModel& model, const std::vector<double>& frequencies);
SpectralEstimate closed_form_estimate(const DependentErrorLinearModel& model, const std::vector<double>& frequencies);
SpectralEstimate lagsum_estimate(const LagCovariances& covs, const std::vector<double>& frequencies);
SpectralEstimate fejer_estimate(const LagCovariances& covs, std::size_t n, const std::vector<double>& frequencies);

/// Trapezoidal quadrature of F_theta exp(i h theta) over a periodic grid.
/// The estimate must sit on periodic_grid(G) with G >= 2|h| + 2.
LinOperator inverse_fourier_cov(const SpectralEstimate& est, long h);

/// Tail bound for a lag sum truncated at H, extrapolated from a geometric fit
/// of |C_h|_HS over h = 1..H: 2 sum_{h>H} c r^h. Infinite when the fitted
/// rate is not below one.
double lagsum_tail_bound(const LagCovariances& covs);

/// Rows "theta,row,col,re,im" then a "theta,trace" block; 17 significant digits.
void write_spectrum_table(const SpectralEstimate& est, std::ostream& os);
SpectralEstimate read_spectrum_table(std::istream& is);

}  // namespace fts
