#include "fts/spectral.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "fts/error.hpp"
#include "fts/stats.hpp"

namespace fts {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_frequency(double theta, const char* what) {
  if (!(theta >= -std::numbers::pi && theta <= std::numbers::pi)) {
    throw std::invalid_argument(std::string(what) + ": theta must lie in [-pi, pi], got " + std::to_string(theta));
  }
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

LinOperator sandwich(const LinOperator& psi, const LinOperator& middle) {
  LinOperator f = psi * middle * adjoint(psi);
  f *= 1.0 / kTwoPi;
  return f;
}

}  // namespace

std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::ClosedForm:
      return "closed-form";
    case Provenance::LagSum:
      return "lag-sum";
    case Provenance::Fejer:
      return "fejer";
    case Provenance::MonteCarlo:
      return "monte-carlo";
  }
  return "unknown";
}

Provenance parse_provenance(const std::string& name) {
  if (name == "closed-form") return Provenance::ClosedForm;
  if (name == "lag-sum") return Provenance::LagSum;
  if (name == "fejer") return Provenance::Fejer;
  if (name == "monte-carlo") return Provenance::MonteCarlo;
  throw std::invalid_argument("unknown provenance '" + name + "' (expected closed-form, lag-sum, fejer, monte-carlo)");
}

std::string SpectralEstimate::provenance_label() const {
  switch (provenance) {
    case Provenance::Fejer:
      return "fejer(" + std::to_string(fejer_n) + ")";
    case Provenance::MonteCarlo:
      return "monte-carlo(" + std::to_string(mc_replications) + "," + std::to_string(mc_n) + ")";
    default:
      return to_string(provenance);
  }
}

LinOperator transfer_function(const LinearModel& model, double theta) {
  require_frequency(theta, "transfer_function");
  LinOperator psi = LinOperator::zero(model.dim());
  for (std::size_t k = 0; k <= model.order(); ++k) {
    psi += std::polar(1.0, -static_cast<double>(k) * theta) * model.psi(k);
  }
  return psi;
}

LinOperator transfer_function(const DependentErrorLinearModel& model, double theta) {
  require_frequency(theta, "transfer_function");
  LinOperator psi = LinOperator::zero(model.dim());
  for (std::size_t k = 0; k <= model.order(); ++k) {
    psi += std::polar(1.0, -static_cast<double>(k) * theta) * model.psi()[k];
  }
  return psi;
}

LinOperator spectral_density_closed(const LinearModel& model, double theta) {
  return sandwich(transfer_function(model, theta), model.innovations().covariance());
}

LinOperator spectral_density_closed(const DependentErrorLinearModel& model, double theta) {
  LinOperator driver = spectral_density_closed(model.error_driver(), theta);
  driver *= kTwoPi;
  return sandwich(transfer_function(model, theta), driver);
}

void validate_lag_covariances(const LagCovariances& covs) {
  if (covs.empty()) throw std::invalid_argument("lag covariances: empty input");
  const long lo = covs.begin()->first;
  const long hi = covs.rbegin()->first;
  if (lo != -hi || static_cast<long>(covs.size()) != 2 * hi + 1) {
    throw std::invalid_argument("lag covariances: asymmetric lag range [" + std::to_string(lo) + ", " +
                                std::to_string(hi) + "], expected -H..H without gaps");
  }
  const std::size_t d = covs.begin()->second.dim();
  for (long h = 0; h <= hi; ++h) {
    const LinOperator& pos = covs.at(h);
    const LinOperator& neg = covs.at(-h);
    if (pos.dim() != d) throw DimensionMismatch("lag covariances", pos.dim(), d);
    if (neg.dim() != d) throw DimensionMismatch("lag covariances", neg.dim(), d);
    if (hs_norm(neg - adjoint(pos)) > 1e-12 * (1.0 + hs_norm(pos))) {
      throw std::invalid_argument("lag covariances: C_{-" + std::to_string(h) + "} is not the adjoint of C_" +
                                  std::to_string(h));
    }
  }
}

std::size_t max_lag(const LagCovariances& covs) {
  validate_lag_covariances(covs);
  return static_cast<std::size_t>(covs.rbegin()->first);
}

LinOperator spectral_density_lagsum(const LagCovariances& covs, double theta) {
  require_frequency(theta, "spectral_density_lagsum");
  validate_lag_covariances(covs);
  LinOperator f = LinOperator::zero(covs.begin()->second.dim());
  for (const auto& [h, c] : covs) f += std::polar(1.0, -static_cast<double>(h) * theta) * c;
  f *= 1.0 / kTwoPi;
  return f;
}

LinOperator fejer_spectral(const LagCovariances& covs, std::size_t n, double theta) {
  if (n == 0) throw std::invalid_argument("fejer_spectral: n >= 1 required");
  require_frequency(theta, "fejer_spectral");
  validate_lag_covariances(covs);
  const auto nn = static_cast<long>(n);
  LinOperator f = LinOperator::zero(covs.begin()->second.dim());
  for (const auto& [h, c] : covs) {
    if (std::labs(h) >= nn) continue;
    const double weight = 1.0 - static_cast<double>(std::labs(h)) / static_cast<double>(n);
    f += (weight * std::polar(1.0, -static_cast<double>(h) * theta)) * c;
  }
  f *= 1.0 / kTwoPi;
  return f;
}

double fejer_error_bound(const LagCovariances& covs, std::size_t n) {
  if (n == 0) throw std::invalid_argument("fejer_error_bound: n >= 1 required");
  validate_lag_covariances(covs);
  double s = 0.0;
  for (const auto& [h, c] : covs) s += static_cast<double>(std::labs(h)) * hs_norm(c);
  return s / (kTwoPi * static_cast<double>(n));
}

LinOperator empirical_cov(const SamplePath& path, long h) {
  const std::size_t n = path.size();
  if (n == 0) throw std::invalid_argument("empirical_cov: empty path");
  if (static_cast<std::size_t>(std::labs(h)) >= n) {
    throw std::invalid_argument("empirical_cov: |h| = " + std::to_string(std::labs(h)) + " must be < n = " +
                                std::to_string(n));
  }
  if (h < 0) return adjoint(empirical_cov(path, -h));
  const auto d = static_cast<Eigen::Index>(path.dim());
  CMatrix x(d, static_cast<Eigen::Index>(n));
  for (std::size_t t = 0; t < n; ++t) x.col(static_cast<Eigen::Index>(t)) = path.observations[t].coeffs();
  const auto lag = static_cast<Eigen::Index>(h);
  const auto len = static_cast<Eigen::Index>(n) - lag;
  CMatrix c = x.middleCols(lag, len) * x.leftCols(len).adjoint();
  c /= static_cast<double>(n);
  if (h == 0) c = 0.5 * (c + c.adjoint()).eval();
  return LinOperator(std::move(c));
}

LagCovariances empirical_covariances(const SamplePath& path, std::size_t max_lag) {
  LagCovariances covs;
  for (std::size_t h = 0; h <= max_lag; ++h) {
    LinOperator c = empirical_cov(path, static_cast<long>(h));
    if (h > 0) covs.emplace(-static_cast<long>(h), adjoint(c));
    covs.emplace(static_cast<long>(h), std::move(c));
  }
  return covs;
}

namespace {

template <typename Model>
LagCovariances model_covariances_impl(const Model& model, std::size_t max_lag) {
  LagCovariances covs;
  for (std::size_t h = 0; h <= max_lag; ++h) {
    LinOperator c = theoretical_cov(model, static_cast<long>(h));
    if (h > 0) covs.emplace(-static_cast<long>(h), adjoint(c));
    covs.emplace(static_cast<long>(h), std::move(c));
  }
  return covs;
}

template <typename Fn>
SpectralEstimate tabulate(const std::vector<double>& frequencies, Provenance provenance, Fn&& fn) {
  SpectralEstimate est;
  est.provenance = provenance;
  est.frequencies = frequencies;
  est.operators.reserve(frequencies.size());
  for (double theta : frequencies) est.operators.push_back(fn(theta));
  return est;
}

}  // namespace

LagCovariances model_covariances(const LinearModel& model, std::size_t max_lag) {
  return model_covariances_impl(model, max_lag);
}

LagCovariances model_covariances(const DependentErrorLinearModel& model, std::size_t max_lag) {
  return model_covariances_impl(model, max_lag);
}

std::vector<double> periodic_grid(std::size_t grid_size) {
  if (grid_size == 0) throw std::invalid_argument("periodic_grid: G >= 1 required");
  std::vector<double> grid(grid_size);
  for (std::size_t g = 0; g < grid_size; ++g) {
    // Integer numerator keeps nested grids (G | G') bit-identical at shared points.
    grid[g] = std::numbers::pi * static_cast<double>(2 * static_cast<long>(g) - static_cast<long>(grid_size)) /
              static_cast<double>(grid_size);
  }
  return grid;
}

SpectralEstimate closed_form_estimate(const LinearModel& model, const std::vector<double>& frequencies) {
  return tabulate(frequencies, Provenance::ClosedForm,
                  [&](double theta) { return spectral_density_closed(model, theta); });
}

SpectralEstimate closed_form_estimate(const DependentErrorLinearModel& model, const std::vector<double>& frequencies) {
  return tabulate(frequencies, Provenance::ClosedForm,
                  [&](double theta) { return spectral_density_closed(model, theta); });
}

SpectralEstimate lagsum_estimate(const LagCovariances& covs, const std::vector<double>& frequencies) {
  return tabulate(frequencies, Provenance::LagSum,
                  [&](double theta) { return spectral_density_lagsum(covs, theta); });
}

SpectralEstimate fejer_estimate(const LagCovariances& covs, std::size_t n, const std::vector<double>& frequencies) {
  SpectralEstimate est =
      tabulate(frequencies, Provenance::Fejer, [&](double theta) { return fejer_spectral(covs, n, theta); });
  est.fejer_n = n;
  return est;
}

LinOperator inverse_fourier_cov(const SpectralEstimate& est, long h) {
  const std::size_t grid_size = est.size();
  const std::size_t required = 2 * static_cast<std::size_t>(std::labs(h)) + 2;
  if (grid_size < required) {
    throw std::invalid_argument("inverse_fourier_cov: grid too coarse for lag " + std::to_string(h) +
                                ", need G >= " + std::to_string(required) + " (have " + std::to_string(grid_size) +
                                ")");
  }
  const std::vector<double> expected = periodic_grid(grid_size);
  for (std::size_t g = 0; g < grid_size; ++g) {
    if (std::abs(est.frequencies[g] - expected[g]) > 1e-12) {
      throw std::invalid_argument("inverse_fourier_cov: estimate is not on the uniform periodic grid of size " +
                                  std::to_string(grid_size));
    }
  }
  // Periodic trapezoid: both end points coincide, so every node has weight 2 pi / G.
  LinOperator c = LinOperator::zero(est.dim());
  for (std::size_t g = 0; g < grid_size; ++g) {
    c += std::polar(1.0, static_cast<double>(h) * est.frequencies[g]) * est.operators[g];
  }
  c *= kTwoPi / static_cast<double>(grid_size);
  return c;
}

double lagsum_tail_bound(const LagCovariances& covs) {
  const std::size_t H = max_lag(covs);
  if (H == 0) return std::numeric_limits<double>::infinity();
  std::vector<double> norms;
  for (std::size_t h = 1; h <= H; ++h) norms.push_back(hs_norm(covs.at(static_cast<long>(h))));
  const GeometricFit fit = fit_geometric_decay(norms, 1);
  if (fit.points == 0) return 0.0;
  if (!(fit.rate < 1.0)) return std::numeric_limits<double>::infinity();
  const double c = std::exp(fit.intercept);
  return 2.0 * c * std::pow(fit.rate, static_cast<double>(H + 1)) / (1.0 - fit.rate);
}

void write_spectrum_table(const SpectralEstimate& est, std::ostream& os) {
  os << "# spectral-estimate provenance=" << est.provenance_label() << " dim=" << est.dim() << " G=" << est.size()
     << "\n";
  os << "theta,row,col,re,im\n";
  for (std::size_t g = 0; g < est.size(); ++g) {
    const LinOperator& f = est.operators[g];
    for (std::size_t r = 0; r < f.dim(); ++r) {
      for (std::size_t c = 0; c < f.dim(); ++c) {
        os << fmt17(est.frequencies[g]) << ',' << r << ',' << c << ',' << fmt17(f(r, c).real()) << ','
           << fmt17(f(r, c).imag()) << '\n';
      }
    }
  }
  os << "# trace\n";
  os << "theta,trace\n";
  for (std::size_t g = 0; g < est.size(); ++g) {
    os << fmt17(est.frequencies[g]) << ',' << fmt17(trace(est.operators[g]).real()) << '\n';
  }
}

SpectralEstimate read_spectrum_table(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("# spectral-estimate", 0) != 0) {
    throw std::runtime_error("spectrum table: missing '# spectral-estimate' header");
  }
  SpectralEstimate est;
  std::size_t dim = 0, grid_size = 0;
  {
    std::istringstream hs(line.substr(std::string("# spectral-estimate").size()));
    std::string kv;
    while (hs >> kv) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = kv.substr(0, eq), value = kv.substr(eq + 1);
      if (key == "dim") {
        dim = std::stoul(value);
      } else if (key == "G") {
        grid_size = std::stoul(value);
      } else if (key == "provenance") {
        const auto paren = value.find('(');
        est.provenance = parse_provenance(value.substr(0, paren));
        if (paren != std::string::npos) {
          const std::string args = value.substr(paren + 1, value.size() - paren - 2);
          if (est.provenance == Provenance::Fejer) {
            est.fejer_n = std::stoul(args);
          } else if (est.provenance == Provenance::MonteCarlo) {
            const auto comma = args.find(',');
            est.mc_replications = std::stoul(args.substr(0, comma));
            est.mc_n = std::stoul(args.substr(comma + 1));
          }
        }
      }
    }
  }
  if (!std::getline(is, line) || line != "theta,row,col,re,im") {
    throw std::runtime_error("spectrum table: missing column header");
  }
  est.frequencies.resize(grid_size);
  est.operators.assign(grid_size, LinOperator::zero(dim));
  std::vector<CMatrix> entries(grid_size, CMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim)));
  for (std::size_t i = 0; i < grid_size * dim * dim; ++i) {
    if (!std::getline(is, line)) throw std::runtime_error("spectrum table: truncated entry block");
    for (char& ch : line) {
      if (ch == ',') ch = ' ';
    }
    std::istringstream fields(line);
    double theta = 0.0, re = 0.0, im = 0.0;
    std::size_t r = 0, c = 0;
    if (!(fields >> theta >> r >> c >> re >> im) || r >= dim || c >= dim) {
      throw std::runtime_error("spectrum table: malformed row '" + line + "'");
    }
    const std::size_t g = i / (dim * dim);
    est.frequencies[g] = theta;
    entries[g](static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = Complex(re, im);
  }
  for (std::size_t g = 0; g < grid_size; ++g) est.operators[g] = LinOperator(std::move(entries[g]));
  return est;
}

}  // namespace fts
