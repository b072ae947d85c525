#pragma once

// Small descriptive-statistics helpers shared by the Monte Carlo harness and
// the martingale diagnostics.

#include <cstddef>
#include <span>
#include <vector>

namespace fts {

/// Pairwise (cascade) summation; the result depends only on the order of the
/// input, never on how the work that produced it was scheduled.
double pairwise_sum(std::span<const double> values);

struct Moments {
  double mean = 0.0;
  double variance = 0.0;  // divisor N - 1
  double skewness = 0.0;
  double excess_kurtosis = 0.0;
};

Moments moments(std::span<const double> values);

double correlation(std::span<const double> a, std::span<const double> b);

double normal_cdf(double x, double variance);

/// sup_x |F_N(x) - Phi(x / sqrt(variance))|.
double ks_distance_normal(std::span<const double> samples, double variance);

/// Least-squares fit of log(values[i]) = intercept + slope * (first + i).
/// Non-positive values are skipped.
struct GeometricFit {
  double slope = 0.0;      // natural-log slope
  double intercept = 0.0;
  double rate = 0.0;       // exp(slope)
  std::size_t points = 0;
};

GeometricFit fit_geometric_decay(std::span<const double> values, std::size_t first_index);

}  // namespace fts
