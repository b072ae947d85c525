#include "fts/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fts {

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 8) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

Moments moments(std::span<const double> values) {
  Moments m;
  const auto n = static_cast<double>(values.size());
  if (values.empty()) return m;
  m.mean = pairwise_sum(values) / n;
  std::vector<double> c2(values.size()), c3(values.size()), c4(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double c = values[i] - m.mean;
    c2[i] = c * c;
    c3[i] = c2[i] * c;
    c4[i] = c2[i] * c2[i];
  }
  const double m2 = pairwise_sum(c2) / n;
  const double m3 = pairwise_sum(c3) / n;
  const double m4 = pairwise_sum(c4) / n;
  m.variance = values.size() > 1 ? m2 * n / (n - 1.0) : 0.0;
  if (m2 > 0.0) {
    m.skewness = m3 / std::pow(m2, 1.5);
    m.excess_kurtosis = m4 / (m2 * m2) - 3.0;
  }
  return m;
}

double correlation(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("correlation: length mismatch");
  const Moments ma = moments(a);
  const Moments mb = moments(b);
  std::vector<double> prod(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) prod[i] = (a[i] - ma.mean) * (b[i] - mb.mean);
  const double denom = std::sqrt(ma.variance * mb.variance);
  if (!(denom > 0.0)) return 0.0;
  return pairwise_sum(prod) / (static_cast<double>(a.size()) - 1.0) / denom;
}

double normal_cdf(double x, double variance) { return 0.5 * std::erfc(-x / std::sqrt(2.0 * variance)); }

double ks_distance_normal(std::span<const double> samples, double variance) {
  if (!(variance > 0.0)) throw std::invalid_argument("ks_distance_normal: variance must be > 0");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const auto n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = normal_cdf(sorted[i], variance);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

GeometricFit fit_geometric_decay(std::span<const double> values, std::size_t first_index) {
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] > 0.0 && std::isfinite(values[i])) {
      xs.push_back(static_cast<double>(first_index + i));
      ys.push_back(std::log(values[i]));
    }
  }
  GeometricFit fit;
  fit.points = xs.size();
  if (xs.size() < 2) {
    fit.rate = xs.empty() ? 0.0 : 1.0;
    return fit;
  }
  const double mx = pairwise_sum(xs) / static_cast<double>(xs.size());
  const double my = pairwise_sum(ys) / static_cast<double>(ys.size());
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.rate = std::exp(fit.slope);
  return fit;
}

}  // namespace fts
