#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <ostream>

#include "fts/cli.hpp"
#include "fts/error.hpp"
#include "fts/martingale.hpp"
#include "fts/montecarlo.hpp"
#include "report.hpp"

namespace fts::cli {

namespace {

using detail::Json;
using detail::ReportWriter;

constexpr std::uint64_t kAuxStream = 0;
constexpr std::uint64_t kA3Tag = 0x6133;
constexpr std::uint64_t kDecayTag = 0x6d617070;
constexpr std::size_t kDefaultMcLags = 20;

using Metrics = std::vector<std::pair<std::string, double>>;

struct Context {
  const ExperimentConfig& config;
  std::uint64_t seed;
  std::size_t threads;
  ReportWriter& report;
};

MonteCarloOptions mc_options(const Context& ctx) {
  MonteCarloOptions o;
  o.seed = ctx.seed;
  o.threads = ctx.threads;
  return o;
}

double rel_hs(const LinOperator& a, const LinOperator& b) {
  const double scale = hs_norm(b);
  return scale > 0.0 ? hs_norm(a - b) / scale : hs_norm(a - b);
}

std::vector<FunctionVector> test_vectors(const Context& ctx, std::size_t dim) {
  const auto& u = ctx.config.parameters.u;
  return u ? build_test_vectors(*u, dim, ctx.seed) : default_test_vectors(dim, ctx.seed);
}

Json projection_json(const ProjectionStats& ps) {
  Json rec;
  rec["record"] = "projection";
  rec["u"] = detail::vector_json(ps.u);
  rec["reference_variance"] = ps.reference_variance;
  rec["var_re"] = ps.var_re;
  rec["var_im"] = ps.var_im;
  rec["corr_re_im"] = ps.corr_re_im;
  rec["skewness_re"] = ps.skewness_re;
  rec["excess_kurtosis_re"] = ps.excess_kurtosis_re;
  rec["re"] = ps.re ? detail::diagnostics_json(*ps.re) : Json(nullptr);
  rec["im"] = ps.im ? detail::diagnostics_json(*ps.im) : Json(nullptr);
  return rec;
}

Metrics clt_like(const Context& ctx, const ProcessModel& model, bool theta0) {
  const Parameters& p = ctx.config.parameters;
  const std::size_t n = *p.n;
  const double theta = theta0 ? 0.0 : p.theta->resolve(n);
  const Provenance prov = p.provenance.value_or(std::holds_alternative<ArchModel>(model) ? Provenance::MonteCarlo
                                                                                         : Provenance::ClosedForm);
  const CltReport r = run_clt(model, theta, n, *p.replications, test_vectors(ctx, model_dim(model)), prov,
                              mc_options(ctx));

  Json summary;
  summary["record"] = "clt_summary";
  summary["model"] = r.model_id;
  summary["theta"] = r.theta;
  summary["n"] = r.n;
  summary["R"] = r.replications;
  summary["real_mode"] = r.real_mode;
  summary["mode_note"] = r.mode_note;
  summary["reference_provenance"] = r.reference_provenance;
  summary["trace_mean"] = r.trace_mean;
  summary["trace_se"] = r.trace_se;
  summary["reference_trace"] = trace(r.reference).real();
  ctx.report.add(std::move(summary));
  auto op_record = [&](const char* name, const LinOperator& op) {
    Json rec;
    rec["record"] = name;
    rec["operator"] = detail::operator_json(op);
    ctx.report.add(std::move(rec));
  };
  op_record("gamma_hat", r.gamma_hat);
  op_record("relation_hat", r.relation_hat);
  op_record("reference", r.reference);
  if (r.finite_n_reference) op_record("finite_n_reference", *r.finite_n_reference);
  for (const auto& ps : r.projections) ctx.report.add(projection_json(ps));

  // In real mode S is real, so the relation operator equals gamma rather than vanishing.
  const double relation_rel = r.real_mode ? rel_hs(r.relation_hat, r.reference)
                                          : hs_norm(r.relation_hat) / std::max(hs_norm(r.reference), 1e-300);
  const double ref_trace = trace(r.reference).real();
  double var_dev = 0.0, corr = 0.0, ks = 0.0, kurt = 0.0;
  for (const auto& ps : r.projections) {
    for (const auto* d : {&ps.re, &ps.im}) {
      if (!*d) continue;
      var_dev = std::max(var_dev, std::abs((*d)->variance_ratio - 1.0));
      ks = std::max(ks, (*d)->ks);
      kurt = std::max(kurt, std::abs((*d)->excess_kurtosis));
    }
    if (!r.real_mode) corr = std::max(corr, std::abs(ps.corr_re_im));
  }
  Metrics m = {{"gamma_rel_err", rel_hs(r.gamma_hat, r.reference)},
               {"trace_rel_err", std::abs(r.trace_mean - ref_trace) / std::max(ref_trace, 1e-300)},
               {"var_ratio_dev", var_dev},
               {"ks", ks},
               {"kurtosis_abs", kurt}};
  if (!theta0) {
    m.emplace_back("relation_rel", relation_rel);
    m.emplace_back("corr_abs", corr);
  }
  return m;
}

Metrics cross_freq(const Context& ctx, const ProcessModel& model) {
  const Parameters& p = ctx.config.parameters;
  const std::size_t n = *p.n;
  const CrossFreqReport r = run_cross_freq(model, p.theta->resolve(n), p.theta_prime->resolve(n), n, *p.replications,
                                           test_vectors(ctx, model_dim(model)), mc_options(ctx));
  Json summary;
  summary["record"] = "cross_freq_summary";
  summary["model"] = r.model_id;
  summary["theta"] = r.theta;
  summary["theta_prime"] = r.theta_prime;
  summary["n"] = r.n;
  summary["R"] = r.replications;
  summary["normalized_cross_hs"] = r.normalized_cross_hs;
  Json corr = Json::array();
  double max_corr = 0.0;
  for (Complex c : r.projection_corr) {
    corr.push_back(detail::complex_json(c));
    max_corr = std::max(max_corr, std::abs(c));
  }
  summary["projection_corr"] = std::move(corr);
  ctx.report.add(std::move(summary));
  for (const auto& [name, op] : {std::pair<const char*, const LinOperator*>{"cross_cov", &r.cross_cov},
                                 {"gamma_theta", &r.gamma_theta},
                                 {"gamma_theta_prime", &r.gamma_theta_prime}}) {
    Json rec;
    rec["record"] = name;
    rec["operator"] = detail::operator_json(*op);
    ctx.report.add(std::move(rec));
  }
  return {{"cross_rel", r.normalized_cross_hs}, {"proj_corr_abs", max_corr}};
}

LagCovariances covariances_of(const ProcessModel& model, std::optional<std::size_t> max_lag) {
  if (const auto* lin = std::get_if<LinearModel>(&model)) return model_covariances(*lin, max_lag.value_or(lin->order()));
  const auto& dep = std::get<DependentErrorLinearModel>(model);
  return model_covariances(dep, max_lag.value_or(dep.order() + dep.error_driver().order()));
}

SpectralEstimate estimate_for(const ExperimentConfig& config, std::uint64_t seed, const std::vector<double>& grid) {
  const Parameters& p = config.parameters;
  if (p.path_file) {
    const SamplePath path = read_path_matrix(*p.path_file);
    const LagCovariances covs = empirical_covariances(path, *p.max_lag);
    if (p.provenance == Provenance::Fejer) return fejer_estimate(covs, p.n.value_or(path.size()), grid);
    return lagsum_estimate(covs, grid);
  }
  const ProcessModel model = build_model(config.model);
  const bool arch = std::holds_alternative<ArchModel>(model);
  const Provenance prov = p.provenance.value_or(arch ? Provenance::MonteCarlo : Provenance::ClosedForm);
  switch (prov) {
    case Provenance::ClosedForm:
      if (const auto* lin = std::get_if<LinearModel>(&model)) return closed_form_estimate(*lin, grid);
      return closed_form_estimate(std::get<DependentErrorLinearModel>(model), grid);
    case Provenance::LagSum:
      return lagsum_estimate(covariances_of(model, std::nullopt), grid);
    case Provenance::Fejer:
      return fejer_estimate(covariances_of(model, std::nullopt), *p.n, grid);
    case Provenance::MonteCarlo: {
      const MonteCarloOptions defaults;
      const std::size_t length = p.n.value_or(defaults.pilot_length);
      RngStream pilot = RngStream(seed, kAuxStream).substream(0x73706563);
      const SamplePath path = simulate(model, length, pilot);
      SpectralEstimate est = lagsum_estimate(empirical_covariances(path, p.max_lag.value_or(kDefaultMcLags)), grid);
      est.provenance = Provenance::MonteCarlo;
      est.mc_replications = 1;
      est.mc_n = length;
      return est;
    }
  }
  throw std::logic_error("unreachable provenance");
}

Metrics spectrum(const Context& ctx, const SpectralEstimate& est) {
  double worst = 0.0;
  Json traces = Json::array();
  for (std::size_t g = 0; g < est.size(); ++g) {
    const LinOperator& f = est.operators[g];
    const LinOperator herm = 0.5 * (f + adjoint(f));
    const double min_eig = hermitian_eigenvalues(herm).minCoeff();
    worst = std::max(worst, std::max(0.0, -min_eig) / (1.0 + hs_norm(f)));
    traces.push_back(trace(f).real());
  }
  Json rec;
  rec["record"] = "spectrum_summary";
  rec["provenance"] = est.provenance_label();
  rec["G"] = est.size();
  rec["dim"] = est.dim();
  rec["frequencies"] = est.frequencies;
  rec["trace"] = std::move(traces);
  ctx.report.add(std::move(rec));
  return {{"neg_eig_rel", worst}};
}

Metrics inverse_fourier(const Context& ctx, const ProcessModel& model) {
  const Parameters& p = ctx.config.parameters;
  const SpectralEstimate est = estimate_for(ctx.config, ctx.seed, periodic_grid(*p.grid_size));
  const LagCovariances truth = covariances_of(model, std::nullopt);
  const std::size_t order = max_lag(truth);
  double worst = 0.0;
  for (long h = -static_cast<long>(*p.max_lag); h <= static_cast<long>(*p.max_lag); ++h) {
    const LinOperator recovered = inverse_fourier_cov(est, h);
    LinOperator target = static_cast<std::size_t>(std::labs(h)) <= order ? truth.at(h)
                                                                         : LinOperator::zero(model_dim(model));
    if (est.provenance == Provenance::Fejer) {
      const double w = 1.0 - static_cast<double>(std::labs(h)) / static_cast<double>(est.fejer_n);
      target = std::max(w, 0.0) * target;
    }
    const double err = hs_norm(recovered - target);
    const double rel = hs_norm(target) > 0.0 ? err / hs_norm(target) : err;
    worst = std::max(worst, rel);
    Json rec;
    rec["record"] = "inverse_fourier_lag";
    rec["h"] = h;
    rec["recovered"] = detail::operator_json(recovered);
    rec["target"] = detail::operator_json(target);
    rec["abs_err_hs"] = err;
    rec["rel_err_hs"] = rel;
    ctx.report.add(std::move(rec));
  }
  Json rec;
  rec["record"] = "inverse_fourier_summary";
  rec["provenance"] = est.provenance_label();
  rec["G"] = *p.grid_size;
  rec["H"] = *p.max_lag;
  rec["max_err"] = worst;
  ctx.report.add(std::move(rec));
  // Relative error where the target is nonzero, absolute error where it vanishes.
  return {{"cov_err", worst}};
}

Metrics a3(const Context& ctx, const ProcessModel& model) {
  const Parameters& p = ctx.config.parameters;
  const RngStream rng = RngStream(ctx.seed, kAuxStream).substream(kA3Tag);
  const A3Report r = a3_sum(model, *p.horizon, rng, p.replications.value_or(1), ctx.threads);
  Json rec;
  rec["record"] = "a3_summary";
  rec["model"] = describe(model);
  rec["T"] = *p.horizon;
  rec["exact"] = r.exact;
  rec["R"] = r.replications;
  rec["terms"] = r.terms;
  rec["partial_sum"] = r.partial_sum;
  rec["decay"] = detail::fit_json(r.decay);
  ctx.report.add(std::move(rec));
  return {{"partial_sum", r.partial_sum}, {"decay_rate", r.decay.rate}};
}

Metrics decomposition(const Context& ctx, const ProcessModel& model) {
  const Parameters& p = ctx.config.parameters;
  const auto& lin = std::get<LinearModel>(model);
  const double theta = *p.theta->value;
  const std::vector<std::size_t> ns = p.n_values.value_or(std::vector<std::size_t>{4, 64});
  const std::vector<std::size_t> a2_ns = p.a2_n_values.value_or(std::vector<std::size_t>{16, 64, 256, 1024});
  double worst = 0.0;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    RngStream rng(ctx.seed, i + 1);
    const DecompositionReport r = decomposition_check(lin, theta, ns[i], rng);
    worst = std::max(worst, r.relative_error);
    Json rec;
    rec["record"] = "decomposition";
    rec["theta"] = r.theta;
    rec["n"] = r.n;
    rec["dft"] = detail::vector_json(r.dft);
    rec["martingale_part"] = detail::vector_json(r.martingale_part);
    rec["conditional_part"] = detail::vector_json(r.conditional_part);
    rec["relative_error"] = r.relative_error;
    rec["conditional_norm_sq_over_n"] = r.conditional_norm_sq_over_n;
    ctx.report.add(std::move(rec));
  }
  const std::size_t reps = p.replications.value_or(200);
  const std::vector<double> profile =
      a2_profile(lin, theta, a2_ns, RngStream(ctx.seed, kAuxStream).substream(0x6132), reps, ctx.threads);
  double rises = 0.0;
  for (std::size_t i = 1; i < profile.size(); ++i) rises += profile[i] > profile[i - 1] ? 1.0 : 0.0;
  Json rec;
  rec["record"] = "a2_profile";
  rec["theta"] = theta;
  rec["R"] = reps;
  rec["n"] = a2_ns;
  rec["mean_conditional_norm_sq_over_n"] = profile;
  ctx.report.add(std::move(rec));
  return {{"reconstruction_rel_err", worst}, {"a2_nonmonotone_steps", rises}};
}

Metrics m_approx_decay(const Context& ctx, const ProcessModel& model) {
  const Parameters& p = ctx.config.parameters;
  const RngStream rng = RngStream(ctx.seed, kAuxStream).substream(kDecayTag);
  const CouplingDecay d = coupling_decay(model, 1, *p.m_max, rng, *p.replications, ctx.threads);
  Json rec;
  rec["record"] = "m_approx_decay";
  rec["model"] = describe(model);
  rec["R"] = d.replications;
  rec["m"] = d.lags;
  rec["nu2"] = d.nu2;
  rec["fit"] = detail::fit_json(d.fit);
  ctx.report.add(std::move(rec));
  return {{"slope", d.fit.slope}};
}

Json config_record(const ExperimentConfig& config, std::uint64_t seed) {
  nlohmann::json doc = to_json(config);
  doc.erase("output");
  doc.erase("table_output");
  doc["seed"] = seed;
  Json rec;
  rec["record"] = "config";
  rec["config"] = Json::parse(doc.dump());
  return rec;
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

int report_error(std::ostream& err, const std::string& what) {
  err << "error: " << what << '\n';
  return 2;
}

template <typename Fn>
int guarded(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const ConfigError& e) {
    return report_error(err, e.what());
  } catch (const NumericalError& e) {
    return report_error(err, std::string("numerical invariant violated: ") + e.what());
  } catch (const std::invalid_argument& e) {
    return report_error(err, e.what());
  } catch (const std::exception& e) {
    return report_error(err, e.what());
  }
}

}  // namespace

bool RunResult::all_pass() const {
  return std::all_of(thresholds.begin(), thresholds.end(), [](const ThresholdResult& t) { return t.pass; });
}

SpectralEstimate spectrum_for(const ExperimentConfig& config, const RunOptions& options) {
  if (config.kind != ExperimentKind::Spectrum) {
    throw ConfigError("experiment: spectrum tables need experiment \"spectrum\"");
  }
  return estimate_for(config, options.seed.value_or(config.seed), periodic_grid(*config.parameters.grid_size));
}

RunResult run_experiment(const ExperimentConfig& config, const RunOptions& options) {
  const std::uint64_t seed = options.seed.value_or(config.seed);
  ReportWriter report;
  report.add(config_record(config, seed));
  const Context ctx{config, seed, std::max<std::size_t>(options.threads, 1), report};

  Metrics metrics;
  if (config.kind == ExperimentKind::Spectrum) {
    metrics = spectrum(ctx, spectrum_for(config, options));
  } else {
    const ProcessModel model = build_model(config.model);
    switch (config.kind) {
      case ExperimentKind::Clt:
        metrics = clt_like(ctx, model, false);
        break;
      case ExperimentKind::Theta0:
        metrics = clt_like(ctx, model, true);
        break;
      case ExperimentKind::CrossFreq:
        metrics = cross_freq(ctx, model);
        break;
      case ExperimentKind::InverseFourier:
        metrics = inverse_fourier(ctx, model);
        break;
      case ExperimentKind::A3:
        metrics = a3(ctx, model);
        break;
      case ExperimentKind::Decomposition:
        metrics = decomposition(ctx, model);
        break;
      case ExperimentKind::MApproxDecay:
        metrics = m_approx_decay(ctx, model);
        break;
      case ExperimentKind::Spectrum:
        break;
    }
  }

  RunResult result;
  for (const auto& [name, limit] : config.thresholds) {
    const auto it = std::find_if(metrics.begin(), metrics.end(), [&](const auto& m) { return m.first == name; });
    if (it == metrics.end()) throw ConfigError("thresholds." + name + ": not measured in this mode");
    ThresholdResult t{name, it->second, limit, it->second <= limit};
    Json rec;
    rec["record"] = "threshold";
    rec["name"] = t.name;
    rec["value"] = t.value;
    rec["limit"] = t.limit;
    rec["pass"] = t.pass;
    report.add(std::move(rec));
    result.thresholds.push_back(std::move(t));
  }
  for (const auto& [name, value] : metrics) {
    Json rec;
    rec["record"] = "metric";
    rec["name"] = name;
    rec["value"] = value;
    report.add(std::move(rec));
  }
  result.report_path = options.out.value_or(config.output);
  report.write(result.report_path);
  return result;
}

int run_command(const std::string& config_path, const RunOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ExperimentConfig config = load_config(config_path);
    const RunResult result = run_experiment(config, options);
    for (const auto& t : result.thresholds) {
      out << (t.pass ? "PASS " : "FAIL ") << t.name << " value=" << fmt(t.value) << " limit=" << fmt(t.limit) << '\n';
    }
    out << "report: " << result.report_path << '\n';
    return result.all_pass() ? 0 : 1;
  });
}

int spectrum_command(const std::string& config_path, const RunOptions& options, std::ostream& out,
                     std::ostream& err) {
  return guarded(err, [&] {
    const ExperimentConfig config = load_config(config_path);
    const SpectralEstimate est = spectrum_for(config, options);
    const std::string path = options.out.value_or(config.table_output.value_or(config.output + ".csv"));
    const std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream file(p, std::ios::binary | std::ios::trunc);
    if (!file) throw std::runtime_error("cannot write spectrum table '" + path + "'");
    write_spectrum_table(est, file);
    if (!file) throw std::runtime_error("error writing spectrum table '" + path + "'");
    out << "spectrum: " << est.size() << " frequencies, provenance " << est.provenance_label() << ", table " << path
        << '\n';
    return 0;
  });
}

int validate_command(const std::string& config_path, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ExperimentConfig config = load_config(config_path);
    out << "valid: " << to_string(config.kind) << " experiment";
    if (!config.model.is_null()) out << ", model " << describe(build_model(config.model));
    out << '\n';
    return 0;
  });
}

}  // namespace fts::cli
