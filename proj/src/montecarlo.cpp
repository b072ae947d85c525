#include "fts/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "fts/dft.hpp"
#include "fts/stats.hpp"
#include "parallel.hpp"

namespace fts {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr std::uint64_t kAuxStream = 0;
constexpr std::uint64_t kTestVectorTag = 0x7465737476ULL;
constexpr std::uint64_t kPilotTag = 0x70696c6f74ULL;

template <typename Fn>
CMatrix pairwise_matrix_sum(std::size_t lo, std::size_t hi, const Fn& term) {
  if (hi - lo <= 8) {
    CMatrix acc = term(lo);
    for (std::size_t i = lo + 1; i < hi; ++i) acc += term(i);
    return acc;
  }
  const std::size_t mid = lo + (hi - lo) / 2;
  return pairwise_matrix_sum(lo, mid, term) + pairwise_matrix_sum(mid, hi, term);
}

// Scaled transforms s_r = S_n(theta) / sqrt(n), r = 0..R-1, one slot per replication.
std::vector<CVector> scaled_transforms(const ProcessModel& model, std::span<const double> thetas, std::size_t n,
                                       std::size_t replications, const MonteCarloOptions& options,
                                       bool real_part_only) {
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  const std::size_t k = thetas.size();
  std::vector<CVector> out(replications * k);
  detail::parallel_for(replications, options.threads, [&](std::size_t r) {
    RngStream stream(options.seed, r + 1);
    const SamplePath path = simulate(model, n, stream);
    for (std::size_t i = 0; i < k; ++i) {
      CVector s = dft_at(path, thetas[i]).value.coeffs() * scale;
      if (real_part_only) s = s.real().cast<Complex>();
      out[r * k + i] = std::move(s);
    }
  });
  return out;
}

void validate_run(std::size_t n, std::size_t replications, const std::vector<FunctionVector>& u_list,
                  std::size_t dim) {
  if (replications < 100) throw std::invalid_argument("R >= 100 required (got " + std::to_string(replications) + ")");
  if (n < 8) throw std::invalid_argument("n >= 8 required (got " + std::to_string(n) + ")");
  if (u_list.empty()) throw std::invalid_argument("at least one test vector u required");
  for (const auto& u : u_list) {
    if (u.dim() != dim) {
      throw std::invalid_argument("test vector has dim " + std::to_string(u.dim()) + ", model has " +
                                  std::to_string(dim));
    }
    if (std::abs(u.norm() - 1.0) > 1e-10) throw std::invalid_argument("test vectors must have unit norm");
  }
}

long grid_index(double theta, std::size_t n) {
  const double x = theta * static_cast<double>(n) / kTwoPi;
  const double j = std::round(x);
  if (std::abs(x - j) > 1e-9) {
    throw std::invalid_argument("frequency " + std::to_string(theta) + " is not on the Fourier grid 2 pi j / " +
                                std::to_string(n));
  }
  return static_cast<long>(j);
}

std::optional<LinOperator> finite_n_reference(const ProcessModel& model, double theta, std::size_t n) {
  if (const auto* lin = std::get_if<LinearModel>(&model)) {
    return kTwoPi * fejer_spectral(model_covariances(*lin, lin->order()), n, theta);
  }
  if (const auto* dep = std::get_if<DependentErrorLinearModel>(&model)) {
    const std::size_t h = dep->order() + dep->error_driver().order();
    return kTwoPi * fejer_spectral(model_covariances(*dep, h), n, theta);
  }
  return std::nullopt;
}

}  // namespace

NormalityDiagnostics normality_diagnostics(std::span<const double> samples, double reference_variance) {
  if (samples.size() < 100) {
    throw std::invalid_argument("normality_diagnostics: >= 100 samples required (got " +
                                std::to_string(samples.size()) + ")");
  }
  if (!(reference_variance > 0.0)) {
    throw std::invalid_argument("normality_diagnostics: degenerate reference variance " +
                                std::to_string(reference_variance));
  }
  NormalityDiagnostics diag;
  diag.count = samples.size();
  const auto [lo, hi] = std::minmax_element(samples.begin(), samples.end());
  const Moments m = moments(samples);
  diag.standardized_mean = m.mean / std::sqrt(reference_variance / static_cast<double>(samples.size()));
  diag.degenerate = *lo == *hi;
  if (!diag.degenerate) {
    diag.variance_ratio = m.variance / reference_variance;
    diag.skewness = m.skewness;
    diag.excess_kurtosis = m.excess_kurtosis;
  }
  diag.ks = ks_distance_normal(samples, reference_variance);
  return diag;
}

bool within(const NormalityDiagnostics& diag, const NormalityThresholds& t) {
  return !diag.degenerate && diag.variance_ratio >= t.variance_ratio_low &&
         diag.variance_ratio <= t.variance_ratio_high &&
         std::abs(diag.excess_kurtosis) <= t.max_abs_excess_kurtosis && diag.ks <= t.max_ks;
}

std::vector<FunctionVector> default_test_vectors(std::size_t dim, std::uint64_t seed) {
  std::vector<FunctionVector> us;
  us.push_back(FunctionVector::basis(dim, 0));
  FunctionVector ones(CVector::Ones(static_cast<Eigen::Index>(dim)));
  us.push_back((1.0 / ones.norm()) * ones);
  RngStream rng = RngStream(seed, kAuxStream).substream(kTestVectorTag);
  FunctionVector g(dim);
  do {
    for (std::size_t j = 0; j < dim; ++j) g[j] = rng.normal();
  } while (g.norm() == 0.0);
  us.push_back((1.0 / g.norm()) * g);
  return us;
}

bool is_real_frequency(double theta) {
  return std::abs(theta) < 1e-12 || std::abs(std::abs(theta) - std::numbers::pi) < 1e-12;
}

LinOperator reference_operator(const ProcessModel& model, double theta, Provenance provenance, std::size_t n,
                               const MonteCarloOptions& options) {
  if (provenance == Provenance::MonteCarlo) {
    RngStream pilot = RngStream(options.seed, kAuxStream).substream(kPilotTag);
    const SamplePath path = simulate(model, options.pilot_length, pilot);
    return kTwoPi * spectral_density_lagsum(empirical_covariances(path, options.pilot_lags), theta);
  }
  auto from_covs = [&](const LagCovariances& covs) -> LinOperator {
    if (provenance == Provenance::LagSum) return kTwoPi * spectral_density_lagsum(covs, theta);
    return kTwoPi * fejer_spectral(covs, n, theta);
  };
  if (const auto* lin = std::get_if<LinearModel>(&model)) {
    if (provenance == Provenance::ClosedForm) return kTwoPi * spectral_density_closed(*lin, theta);
    return from_covs(model_covariances(*lin, lin->order()));
  }
  if (const auto* dep = std::get_if<DependentErrorLinearModel>(&model)) {
    if (provenance == Provenance::ClosedForm) return kTwoPi * spectral_density_closed(*dep, theta);
    return from_covs(model_covariances(*dep, dep->order() + dep->error_driver().order()));
  }
  throw std::invalid_argument("reference provenance '" + to_string(provenance) +
                              "' is not available for ARCH models (use monte-carlo)");
}

CltReport run_clt(const ProcessModel& model, double theta, std::size_t n, std::size_t replications,
                  const std::vector<FunctionVector>& u_list, Provenance provenance, const MonteCarloOptions& options) {
  const std::size_t dim = model_dim(model);
  validate_run(n, replications, u_list, dim);

  CltReport report;
  report.model_id = describe(model);
  report.theta = theta;
  report.n = n;
  report.replications = replications;
  report.real_mode = is_real_frequency(theta);
  if (report.real_mode) {
    report.mode_note = std::abs(theta) < 1e-12
                           ? "theta = 0: real-limit mode, partial sums against N(0, T)"
                           : "theta = +-pi: real-limit mode (alternating-sign sums), extension of the theta = 0 case";
  }
  report.reference = reference_operator(model, theta, provenance, n, options);
  report.reference_provenance =
      provenance == Provenance::Fejer ? "fejer(" + std::to_string(n) + ")" : to_string(provenance);
  report.finite_n_reference = finite_n_reference(model, theta, n);

  const double thetas[] = {theta};
  const std::vector<CVector> s = scaled_transforms(model, thetas, n, replications, options, report.real_mode);
  const double inv_r = 1.0 / static_cast<double>(replications);

  report.gamma_hat = LinOperator(
      CMatrix(pairwise_matrix_sum(0, replications, [&](std::size_t r) -> CMatrix { return s[r] * s[r].adjoint(); }) *
              inv_r));
  report.relation_hat = LinOperator(CMatrix(
      pairwise_matrix_sum(0, replications, [&](std::size_t r) -> CMatrix { return s[r] * s[r].transpose(); }) *
      inv_r));

  std::vector<double> norms(replications);
  for (std::size_t r = 0; r < replications; ++r) norms[r] = s[r].squaredNorm();
  const Moments tm = moments(norms);
  report.trace_mean = tm.mean;
  report.trace_se = std::sqrt(tm.variance * inv_r);

  const double ref_scale = 1e-14 * (1.0 + hs_norm(report.reference));
  for (const auto& u : u_list) {
    ProjectionStats ps;
    ps.u = u;
    const double gamma_uu = inner(apply(report.reference, u), u).real();
    ps.reference_variance = report.real_mode ? gamma_uu : 0.5 * gamma_uu;
    std::vector<double> re(replications), im(replications);
    for (std::size_t r = 0; r < replications; ++r) {
      const Complex a = u.coeffs().dot(s[r]);  // <s_r, u>
      re[r] = a.real();
      im[r] = a.imag();
    }
    const Moments mre = moments(re);
    const Moments mim = moments(im);
    ps.var_re = mre.variance;
    ps.var_im = mim.variance;
    ps.corr_re_im = correlation(re, im);
    ps.skewness_re = mre.skewness;
    ps.excess_kurtosis_re = mre.excess_kurtosis;
    if (ps.reference_variance > ref_scale) {
      ps.re = normality_diagnostics(re, ps.reference_variance);
      if (!report.real_mode) ps.im = normality_diagnostics(im, ps.reference_variance);
    }
    report.projections.push_back(std::move(ps));
  }
  return report;
}

CltReport run_theta0(const ProcessModel& model, std::size_t n, std::size_t replications,
                     const std::vector<FunctionVector>& u_list, Provenance provenance,
                     const MonteCarloOptions& options) {
  return run_clt(model, 0.0, n, replications, u_list, provenance, options);
}

CrossFreqReport run_cross_freq(const ProcessModel& model, double theta, double theta_prime, std::size_t n,
                               std::size_t replications, const std::vector<FunctionVector>& u_list,
                               const MonteCarloOptions& options) {
  const std::size_t dim = model_dim(model);
  validate_run(n, replications, u_list, dim);
  const auto nn = static_cast<long>(n);
  const long j = grid_index(theta, n);
  const long jp = grid_index(theta_prime, n);
  if (((j - jp) % nn + nn) % nn == 0) {
    throw std::invalid_argument("run_cross_freq: frequencies must differ (grid indices " + std::to_string(j) +
                                " and " + std::to_string(jp) + ")");
  }

  CrossFreqReport report;
  report.model_id = describe(model);
  report.theta = theta;
  report.theta_prime = theta_prime;
  report.n = n;
  report.replications = replications;

  const double thetas[] = {theta, theta_prime};
  const std::vector<CVector> s = scaled_transforms(model, thetas, n, replications, options, false);
  const double inv_r = 1.0 / static_cast<double>(replications);
  auto mean_outer = [&](std::size_t a, std::size_t b) {
    return LinOperator(CMatrix(
        pairwise_matrix_sum(0, replications,
                            [&](std::size_t r) -> CMatrix { return s[2 * r + a] * s[2 * r + b].adjoint(); }) *
        inv_r));
  };
  report.cross_cov = mean_outer(0, 1);
  report.gamma_theta = mean_outer(0, 0);
  report.gamma_theta_prime = mean_outer(1, 1);
  const double denom = std::sqrt(hs_norm(report.gamma_theta) * hs_norm(report.gamma_theta_prime));
  report.normalized_cross_hs = denom > 0.0 ? hs_norm(report.cross_cov) / denom : 0.0;

  for (const auto& u : u_list) {
    std::vector<double> ab_re(replications), ab_im(replications), aa(replications), bb(replications);
    for (std::size_t r = 0; r < replications; ++r) {
      const Complex a = u.coeffs().dot(s[2 * r]);
      const Complex b = u.coeffs().dot(s[2 * r + 1]);
      const Complex ab = a * std::conj(b);
      ab_re[r] = ab.real();
      ab_im[r] = ab.imag();
      aa[r] = std::norm(a);
      bb[r] = std::norm(b);
    }
    const double va = pairwise_sum(aa), vb = pairwise_sum(bb);
    const double d = std::sqrt(va * vb);
    report.projection_corr.push_back(d > 0.0 ? Complex(pairwise_sum(ab_re), pairwise_sum(ab_im)) / d : Complex(0.0));
  }
  return report;
}

std::vector<double> ks_profile(const ProcessModel& model, double theta, const std::vector<std::size_t>& ns,
                               std::size_t replications, const FunctionVector& u, Provenance provenance,
                               const MonteCarloOptions& options) {
  std::vector<double> out;
  for (std::size_t n : ns) {
    const CltReport report = run_clt(model, theta, n, replications, {u}, provenance, options);
    const auto& diag = report.projections.front().re;
    if (!diag) throw std::invalid_argument("ks_profile: reference variance of the projection is zero");
    out.push_back(diag->ks);
  }
  return out;
}

}  // namespace fts
