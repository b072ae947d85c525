#pragma once

#include <cstddef>
#include <vector>

#include "fts/hilbert.hpp"
#include "fts/models.hpp"

namespace fts {

/// S_n(theta) = sum_{t=1}^n X_t exp(-i t theta).
struct DftResult {
  double theta = 0.0;
  FunctionVector value;
  std::size_t n = 0;
};

/// Naive O(n d) evaluation at an arbitrary frequency in [-pi, pi].
DftResult dft_at(const SamplePath& path, double theta);

/// S_n(theta_j) at theta_j = 2 pi j / n for j = -floor(n/2) .. floor(n/2),
/// ordered by j. For even n both j = -n/2 and j = n/2 are returned, so the
/// list has n + 1 entries and only n distinct frequencies. Uses one length-n
/// FFT per coordinate.
std::vector<DftResult> dft_fourier_grid(const SamplePath& path);

/// Fourier frequency 2 pi j / n.
double fourier_frequency(long j, std::size_t n);

/// (1 / (2 pi n)) S_n(theta) (x) S_n(theta).
LinOperator periodogram_op(const DftResult& result);

}  // namespace fts
