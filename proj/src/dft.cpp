#include "fts/dft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace fts {

namespace {

// FFTW planning is not thread-safe; execution on distinct buffers is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(fftw_complex* p) const { fftw_free(p); }
};

struct PlanDestroy {
  void operator()(fftw_plan_s* p) const {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(p);
  }
};

using FftwBuffer = std::unique_ptr<fftw_complex[], FftwFree>;
using FftwPlan = std::unique_ptr<fftw_plan_s, PlanDestroy>;

FftwBuffer make_buffer(std::size_t n) {
  return FftwBuffer(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n)));
}

}  // namespace

DftResult dft_at(const SamplePath& path, double theta) {
  if (path.size() == 0) throw std::invalid_argument("dft_at: empty path");
  if (!(theta >= -std::numbers::pi && theta <= std::numbers::pi)) {
    throw std::invalid_argument("dft_at: theta must lie in [-pi, pi], got " + std::to_string(theta));
  }
  CVector acc = CVector::Zero(static_cast<Eigen::Index>(path.dim()));
  for (std::size_t t = 1; t <= path.size(); ++t) {
    const Complex w = std::polar(1.0, -static_cast<double>(t) * theta);
    acc.noalias() += w * path.at(t).coeffs();
  }
  return {theta, FunctionVector(std::move(acc)), path.size()};
}

double fourier_frequency(long j, std::size_t n) {
  const double theta = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n);
  return std::clamp(theta, -std::numbers::pi, std::numbers::pi);
}

std::vector<DftResult> dft_fourier_grid(const SamplePath& path) {
  const std::size_t n = path.size();
  const std::size_t d = path.dim();
  if (n < 2) throw std::invalid_argument("dft_fourier_grid: n >= 2 required");

  FftwBuffer in = make_buffer(n);
  FftwBuffer out = make_buffer(n);
  FftwPlan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan.reset(fftw_plan_dft_1d(static_cast<int>(n), in.get(), out.get(), FFTW_FORWARD, FFTW_ESTIMATE));
  }
  if (!plan) throw std::runtime_error("dft_fourier_grid: FFTW planning failed for n = " + std::to_string(n));

  // spectrum(k, j) = sum_{s=0}^{n-1} X_{s+1, j} exp(-2 pi i s k / n)
  CMatrix spectrum(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t s = 0; s < n; ++s) {
      const Complex x = path.observations[s][j];
      in[s][0] = x.real();
      in[s][1] = x.imag();
    }
    fftw_execute(plan.get());
    for (std::size_t k = 0; k < n; ++k) {
      spectrum(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) = Complex(out[k][0], out[k][1]);
    }
  }

  // Time starts at t = 1, so S_n(theta_j) = exp(-i theta_j) * spectrum(j mod n).
  const long half = static_cast<long>(n / 2);
  std::vector<DftResult> results;
  results.reserve(static_cast<std::size_t>(2 * half + 1));
  for (long j = -half; j <= half; ++j) {
    const double theta = fourier_frequency(j, n);
    const auto row = static_cast<Eigen::Index>(((j % static_cast<long>(n)) + static_cast<long>(n)) %
                                               static_cast<long>(n));
    CVector value = spectrum.row(row).transpose() * std::polar(1.0, -theta);
    results.push_back({theta, FunctionVector(std::move(value)), n});
  }
  return results;
}

LinOperator periodogram_op(const DftResult& result) {
  if (result.n == 0) throw std::invalid_argument("periodogram_op: n >= 1 required");
  LinOperator p = tensor(result.value, result.value);
  p *= 1.0 / (2.0 * std::numbers::pi * static_cast<double>(result.n));
  return p;
}

}  // namespace fts
