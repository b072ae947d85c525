#include <cmath>
#include <fstream>
#include <numbers>
#include <set>

#include "fts/cli.hpp"
#include "fts/dft.hpp"
#include "fts/error.hpp"
#include "fts/montecarlo.hpp"

namespace fts::cli {

using nlohmann::json;

namespace {

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& path) {
  if (!obj.is_object()) throw ConfigError(path + ": expected an object");
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.contains(key)) throw ConfigError(path + "." + key + ": unknown field");
  }
}

const json& require(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.contains(key)) throw ConfigError(path + "." + key + ": required field missing");
  return obj.at(key);
}

std::size_t as_size(const json& v, const std::string& path) {
  if (v.is_number_unsigned()) return v.get<std::size_t>();
  if (v.is_number_integer()) {
    if (v.get<long long>() < 0) throw ConfigError(path + ": must be >= 0");
    return static_cast<std::size_t>(v.get<long long>());
  }
  throw ConfigError(path + ": expected a non-negative integer");
}

double as_double(const json& v, const std::string& path) {
  if (!v.is_number()) throw ConfigError(path + ": expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(path + ": must be finite");
  return x;
}

std::string as_string(const json& v, const std::string& path) {
  if (!v.is_string()) throw ConfigError(path + ": expected a string");
  return v.get<std::string>();
}

std::vector<std::size_t> as_size_list(const json& v, const std::string& path) {
  if (!v.is_array() || v.empty()) throw ConfigError(path + ": expected a non-empty array of integers");
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(as_size(v[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

Eigen::MatrixXd parse_matrix(const json& v, std::size_t dim, const std::string& path) {
  const auto d = static_cast<Eigen::Index>(dim);
  if (v.is_string()) {
    if (v.get<std::string>() == "identity") return Eigen::MatrixXd::Identity(d, d);
    if (v.get<std::string>() == "zero") return Eigen::MatrixXd::Zero(d, d);
    throw ConfigError(path + ": unknown matrix shorthand '" + v.get<std::string>() + "'");
  }
  if (v.is_number()) return as_double(v, path) * Eigen::MatrixXd::Identity(d, d);
  if (v.is_object()) {
    check_keys(v, {"diag", "scaled_identity", "constant"}, path);
    if (v.size() != 1) throw ConfigError(path + ": exactly one of diag, scaled_identity, constant");
    if (v.contains("diag")) {
      const json& diag = v.at("diag");
      if (!diag.is_array() || diag.size() != dim) {
        throw ConfigError(path + ".diag: expected " + std::to_string(dim) + " numbers");
      }
      Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, d);
      for (Eigen::Index j = 0; j < d; ++j) m(j, j) = as_double(diag[static_cast<std::size_t>(j)], path + ".diag");
      return m;
    }
    if (v.contains("scaled_identity")) {
      return as_double(v.at("scaled_identity"), path + ".scaled_identity") * Eigen::MatrixXd::Identity(d, d);
    }
    return Eigen::MatrixXd::Constant(d, d, as_double(v.at("constant"), path + ".constant"));
  }
  if (!v.is_array() || v.size() != dim) {
    throw ConfigError(path + ": expected a " + std::to_string(dim) + "x" + std::to_string(dim) + " matrix");
  }
  Eigen::MatrixXd m(d, d);
  for (std::size_t r = 0; r < dim; ++r) {
    const json& row = v[r];
    const std::string rp = path + "[" + std::to_string(r) + "]";
    if (!row.is_array() || row.size() != dim) throw ConfigError(rp + ": expected " + std::to_string(dim) + " numbers");
    for (std::size_t c = 0; c < dim; ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = as_double(row[c], rp);
    }
  }
  return m;
}

std::vector<LinOperator> parse_psi(const json& v, std::size_t dim, const std::string& path) {
  if (!v.is_array() || v.empty()) throw ConfigError(path + ": expected a non-empty list of matrices");
  std::vector<LinOperator> psi;
  for (std::size_t k = 0; k < v.size(); ++k) {
    psi.push_back(LinOperator::from_real(parse_matrix(v[k], dim, path + "[" + std::to_string(k) + "]")));
  }
  return psi;
}

InnovationSpec parse_innovations(const json* v, std::size_t dim, const std::string& path) {
  if (v == nullptr) return InnovationSpec::standard(dim);
  check_keys(*v, {"distribution", "covariance"}, path);
  InnovationLaw law = InnovationLaw::Gaussian;
  if (v->contains("distribution")) {
    try {
      law = parse_innovation_law(as_string(v->at("distribution"), path + ".distribution"));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(path + ".distribution: " + e.what());
    }
  }
  Eigen::MatrixXd cov = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  if (v->contains("covariance")) cov = parse_matrix(v->at("covariance"), dim, path + ".covariance");
  if ((cov - cov.transpose()).norm() > 1e-12 * (1.0 + cov.norm())) {
    throw ConfigError(path + ".covariance: must be symmetric");
  }
  try {
    return InnovationSpec(LinOperator::from_real(cov), law);
  } catch (const NumericalError& e) {
    throw ConfigError(path + ".covariance: " + e.what());
  }
}

const json* optional_field(const json& obj, const char* key) { return obj.contains(key) ? &obj.at(key) : nullptr; }

LinearModel build_linear(const json& spec, const std::string& path) {
  const std::string type = as_string(require(spec, "type", path), path + ".type");
  const std::size_t dim = as_size(require(spec, "dim", path), path + ".dim");
  if (dim == 0) throw ConfigError(path + ".dim: must be >= 1");
  if (type == "white-noise") {
    check_keys(spec, {"type", "dim", "innovations"}, path);
    return LinearModel::white_noise(parse_innovations(optional_field(spec, "innovations"), dim, path + ".innovations"));
  }
  if (type == "linear") {
    check_keys(spec, {"type", "dim", "psi", "innovations"}, path);
    return LinearModel(parse_psi(require(spec, "psi", path), dim, path + ".psi"),
                       parse_innovations(optional_field(spec, "innovations"), dim, path + ".innovations"));
  }
  if (type == "geometric") {
    check_keys(spec, {"type", "dim", "rho", "base", "tail_tol", "innovations"}, path);
    const double rho = as_double(require(spec, "rho", path), path + ".rho");
    if (!(std::abs(rho) < 1.0)) throw ConfigError(path + ".rho: |rho| < 1 required");
    Eigen::MatrixXd base =
        spec.contains("base") ? parse_matrix(spec.at("base"), dim, path + ".base")
                              : Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    const double tol = spec.contains("tail_tol") ? as_double(spec.at("tail_tol"), path + ".tail_tol") : 1e-12;
    if (!(tol > 0.0)) throw ConfigError(path + ".tail_tol: must be > 0");
    return LinearModel::geometric(LinOperator::from_real(base), rho,
                                  parse_innovations(optional_field(spec, "innovations"), dim, path + ".innovations"),
                                  tol);
  }
  throw ConfigError(path + ".type: unknown linear model type '" + type +
                    "' (expected white-noise, linear, geometric)");
}

ProcessModel build_model_at(const json& spec, const std::string& path) {
  if (!spec.is_object()) throw ConfigError(path + ": expected an object");
  const std::string type = as_string(require(spec, "type", path), path + ".type");
  if (type == "dependent-error") {
    check_keys(spec, {"type", "dim", "psi", "driver"}, path);
    const std::size_t dim = as_size(require(spec, "dim", path), path + ".dim");
    LinearModel driver = build_linear(require(spec, "driver", path), path + ".driver");
    if (driver.dim() != dim) throw ConfigError(path + ".driver.dim: must equal " + std::to_string(dim));
    return DependentErrorLinearModel(parse_psi(require(spec, "psi", path), dim, path + ".psi"), std::move(driver));
  }
  if (type == "arch") {
    check_keys(spec, {"type", "dim", "delta", "beta", "innovations", "burn_in"}, path);
    const std::size_t dim = as_size(require(spec, "dim", path), path + ".dim");
    if (dim == 0) throw ConfigError(path + ".dim: must be >= 1");
    const json& delta_json = require(spec, "delta", path);
    Eigen::VectorXd delta(static_cast<Eigen::Index>(dim));
    if (delta_json.is_number()) {
      delta.setConstant(as_double(delta_json, path + ".delta"));
    } else {
      if (!delta_json.is_array() || delta_json.size() != dim) {
        throw ConfigError(path + ".delta: expected a number or " + std::to_string(dim) + " numbers");
      }
      for (std::size_t j = 0; j < dim; ++j) delta(static_cast<Eigen::Index>(j)) = as_double(delta_json[j], path + ".delta");
    }
    const Eigen::MatrixXd beta = parse_matrix(require(spec, "beta", path), dim, path + ".beta");
    const std::size_t burn_in =
        spec.contains("burn_in") ? as_size(spec.at("burn_in"), path + ".burn_in") : ArchModel::kDefaultBurnIn;
    try {
      return ArchModel(delta, beta, parse_innovations(optional_field(spec, "innovations"), dim, path + ".innovations"),
                       burn_in);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(path + ": " + e.what());
    }
  }
  return build_linear(spec, path);
}

FrequencySpec parse_frequency(const json& v, const std::string& path) {
  check_keys(v, {"index", "value"}, path);
  if (v.size() != 1) throw ConfigError(path + ": give exactly one of index, value");
  FrequencySpec f;
  if (v.contains("index")) {
    if (!v.at("index").is_number_integer()) throw ConfigError(path + ".index: expected an integer");
    f.index = v.at("index").get<long>();
  } else {
    f.value = as_double(v.at("value"), path + ".value");
    if (std::abs(*f.value) > std::numbers::pi) throw ConfigError(path + ".value: must lie in [-pi, pi]");
  }
  return f;
}

json frequency_to_json(const FrequencySpec& f) {
  if (f.index) return json{{"index", *f.index}};
  return json{{"value", *f.value}};
}

struct KindRules {
  std::set<std::string> required;
  std::set<std::string> optional;
  std::set<std::string> thresholds;
};

const KindRules& rules_for(ExperimentKind kind) {
  static const std::map<ExperimentKind, KindRules> rules = {
      {ExperimentKind::Clt,
       {{"theta", "n", "R"},
        {"u", "provenance"},
        {"gamma_rel_err", "trace_rel_err", "relation_rel", "var_ratio_dev", "corr_abs", "ks", "kurtosis_abs"}}},
      {ExperimentKind::Theta0,
       {{"n", "R"}, {"u", "provenance"}, {"gamma_rel_err", "trace_rel_err", "var_ratio_dev", "ks", "kurtosis_abs"}}},
      {ExperimentKind::CrossFreq, {{"theta", "theta_prime", "n", "R"}, {"u"}, {"cross_rel", "proj_corr_abs"}}},
      {ExperimentKind::Spectrum, {{"G"}, {"provenance", "n", "H", "path_file"}, {"neg_eig_rel"}}},
      {ExperimentKind::InverseFourier, {{"G", "H"}, {"provenance", "n"}, {"cov_err"}}},
      {ExperimentKind::A3, {{"T"}, {"R"}, {"partial_sum", "decay_rate"}}},
      {ExperimentKind::Decomposition,
       {{"theta"}, {"n_values", "a2_n_values", "R"}, {"reconstruction_rel_err", "a2_nonmonotone_steps"}}},
      {ExperimentKind::MApproxDecay, {{"m_max", "R"}, {}, {"slope"}}},
  };
  return rules.at(kind);
}

ExperimentKind parse_kind(const std::string& name) {
  static const std::map<std::string, ExperimentKind> kinds = {
      {"clt", ExperimentKind::Clt},
      {"theta0", ExperimentKind::Theta0},
      {"cross-freq", ExperimentKind::CrossFreq},
      {"spectrum", ExperimentKind::Spectrum},
      {"inverse-fourier", ExperimentKind::InverseFourier},
      {"a3", ExperimentKind::A3},
      {"decomposition", ExperimentKind::Decomposition},
      {"m-approx-decay", ExperimentKind::MApproxDecay},
  };
  const auto it = kinds.find(name);
  if (it == kinds.end()) throw ConfigError("experiment: unknown kind '" + name + "'");
  return it->second;
}

Parameters parse_parameters(const json& v, ExperimentKind kind) {
  const KindRules& rules = rules_for(kind);
  std::set<std::string> allowed = rules.required;
  allowed.insert(rules.optional.begin(), rules.optional.end());
  check_keys(v, allowed, "parameters");
  for (const auto& key : rules.required) {
    if (!v.contains(key)) throw ConfigError("parameters." + key + ": required for experiment " + to_string(kind));
  }
  Parameters p;
  if (v.contains("theta")) p.theta = parse_frequency(v.at("theta"), "parameters.theta");
  if (v.contains("theta_prime")) p.theta_prime = parse_frequency(v.at("theta_prime"), "parameters.theta_prime");
  if (v.contains("n")) p.n = as_size(v.at("n"), "parameters.n");
  if (v.contains("R")) p.replications = as_size(v.at("R"), "parameters.R");
  if (v.contains("H")) p.max_lag = as_size(v.at("H"), "parameters.H");
  if (v.contains("G")) p.grid_size = as_size(v.at("G"), "parameters.G");
  if (v.contains("T")) p.horizon = as_size(v.at("T"), "parameters.T");
  if (v.contains("m_max")) p.m_max = as_size(v.at("m_max"), "parameters.m_max");
  if (v.contains("n_values")) p.n_values = as_size_list(v.at("n_values"), "parameters.n_values");
  if (v.contains("a2_n_values")) p.a2_n_values = as_size_list(v.at("a2_n_values"), "parameters.a2_n_values");
  if (v.contains("u")) p.u = v.at("u");
  if (v.contains("provenance")) {
    try {
      p.provenance = parse_provenance(as_string(v.at("provenance"), "parameters.provenance"));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("parameters.provenance: ") + e.what());
    }
  }
  if (v.contains("path_file")) p.path_file = as_string(v.at("path_file"), "parameters.path_file");
  return p;
}

void validate(const ExperimentConfig& c, const ProcessModel* model) {
  const Parameters& p = c.parameters;
  const bool clt_like = c.kind == ExperimentKind::Clt || c.kind == ExperimentKind::Theta0 ||
                        c.kind == ExperimentKind::CrossFreq;
  if (clt_like) {
    if (*p.replications < 100) throw ConfigError("parameters.R: R ≥ 100 required");
    if (*p.n < 8) throw ConfigError("parameters.n: n ≥ 8 required");
  }
  if (c.kind == ExperimentKind::Decomposition && p.theta->index) {
    throw ConfigError("parameters.theta: decomposition takes a literal {\"value\": x}");
  }
  auto check_frequency = [&](const std::optional<FrequencySpec>& f, const char* name) {
    if (!f) return;
    if (f->index) {
      const std::size_t n = p.n.value_or(0);
      if (n == 0) throw ConfigError(std::string("parameters.") + name + ".index: requires parameters.n");
      if (static_cast<std::size_t>(std::labs(*f->index)) * 2 > n) {
        throw ConfigError(std::string("parameters.") + name + ".index: |j| <= n/2 required");
      }
    }
  };
  check_frequency(p.theta, "theta");
  check_frequency(p.theta_prime, "theta_prime");
  if (c.kind == ExperimentKind::CrossFreq) {
    if (!p.theta->index || !p.theta_prime->index) {
      throw ConfigError("parameters.theta: cross-freq requires Fourier-grid indices for theta and theta_prime");
    }
    const auto n = static_cast<long>(*p.n);
    if (((*p.theta->index - *p.theta_prime->index) % n + n) % n == 0) {
      throw ConfigError("parameters.theta_prime: must differ from theta");
    }
  }
  if (c.kind == ExperimentKind::Decomposition) {
    if (p.replications && *p.replications == 0) throw ConfigError("parameters.R: must be >= 1");
  }
  if (c.kind == ExperimentKind::MApproxDecay) {
    if (*p.m_max < 2) throw ConfigError("parameters.m_max: must be >= 2 to fit a slope");
    if (*p.replications == 0) throw ConfigError("parameters.R: must be >= 1");
  }
  if (c.kind == ExperimentKind::A3 && p.replications && *p.replications == 0) {
    throw ConfigError("parameters.R: must be >= 1");
  }
  if (c.kind == ExperimentKind::Spectrum && *p.grid_size < 8) throw ConfigError("parameters.G: G ≥ 8 required");
  if (c.kind == ExperimentKind::InverseFourier && *p.grid_size < 2 * *p.max_lag + 2) {
    throw ConfigError("parameters.G: need G >= 2H + 2 = " + std::to_string(2 * *p.max_lag + 2));
  }
  if (p.provenance == Provenance::Fejer && !p.n && !p.path_file) throw ConfigError("parameters.n: required for fejer provenance");
  for (const auto& [name, limit] : c.thresholds) {
    if (!rules_for(c.kind).thresholds.contains(name)) {
      throw ConfigError("thresholds." + name + ": unknown threshold for experiment " + to_string(c.kind));
    }
    if (!std::isfinite(limit)) throw ConfigError("thresholds." + name + ": must be finite");
  }

  if (c.kind == ExperimentKind::Spectrum && p.path_file) {
    if (!c.model.is_null()) throw ConfigError("model: give either a model or parameters.path_file, not both");
    if (p.provenance && *p.provenance != Provenance::LagSum && *p.provenance != Provenance::Fejer) {
      throw ConfigError("parameters.provenance: data spectra support lag-sum or fejer");
    }
    if (!p.max_lag) throw ConfigError("parameters.H: required with path_file");
    return;
  }
  if (model == nullptr) throw ConfigError("model: required field missing");

  const bool is_arch = std::holds_alternative<ArchModel>(*model);
  const bool is_linear = std::holds_alternative<LinearModel>(*model);
  if (is_arch && p.provenance && *p.provenance != Provenance::MonteCarlo) {
    throw ConfigError("parameters.provenance: ARCH models support only monte-carlo references");
  }
  if (!is_arch && p.provenance == Provenance::MonteCarlo && c.kind == ExperimentKind::InverseFourier) {
    throw ConfigError("parameters.provenance: inverse-fourier needs a deterministic spectrum");
  }
  if (c.kind == ExperimentKind::InverseFourier && is_arch) {
    throw ConfigError("model.type: inverse-fourier needs exact lag covariances (linear models only)");
  }
  if (c.kind == ExperimentKind::Decomposition && !is_linear) {
    throw ConfigError("model.type: decomposition requires a linear model in i.i.d. innovations");
  }
  if (c.kind == ExperimentKind::A3 && is_arch && !p.replications) {
    throw ConfigError("parameters.R: required for ARCH models");
  }
  if (c.kind == ExperimentKind::MApproxDecay && std::holds_alternative<DependentErrorLinearModel>(*model)) {
    throw ConfigError("model.type: m-approx-decay supports linear and ARCH models");
  }
  if (p.u) build_test_vectors(*p.u, model_dim(*model), c.seed);
}

}  // namespace

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::Clt:
      return "clt";
    case ExperimentKind::Theta0:
      return "theta0";
    case ExperimentKind::CrossFreq:
      return "cross-freq";
    case ExperimentKind::Spectrum:
      return "spectrum";
    case ExperimentKind::InverseFourier:
      return "inverse-fourier";
    case ExperimentKind::A3:
      return "a3";
    case ExperimentKind::Decomposition:
      return "decomposition";
    case ExperimentKind::MApproxDecay:
      return "m-approx-decay";
  }
  return "unknown";
}

double FrequencySpec::resolve(std::size_t n) const {
  if (value) return *value;
  return fourier_frequency(*index, n);
}

ProcessModel build_model(const json& spec) { return build_model_at(spec, "model"); }

std::vector<FunctionVector> build_test_vectors(const json& specs, std::size_t dim, std::uint64_t seed) {
  if (!specs.is_array() || specs.empty()) throw ConfigError("parameters.u: expected a non-empty list");
  const std::vector<FunctionVector> defaults = default_test_vectors(dim, seed);
  std::vector<FunctionVector> out;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const json& s = specs[i];
    const std::string path = "parameters.u[" + std::to_string(i) + "]";
    if (s.is_string()) {
      const std::string name = s.get<std::string>();
      if (name == "e1") {
        out.push_back(defaults[0]);
      } else if (name == "ones") {
        out.push_back(defaults[1]);
      } else if (name == "random") {
        out.push_back(defaults[2]);
      } else {
        throw ConfigError(path + ": unknown test vector '" + name + "' (expected e1, ones, random)");
      }
    } else if (s.is_object()) {
      check_keys(s, {"basis"}, path);
      const std::size_t k = as_size(require(s, "basis", path), path + ".basis");
      if (k >= dim) throw ConfigError(path + ".basis: index must be < dim " + std::to_string(dim));
      out.push_back(FunctionVector::basis(dim, k));
    } else if (s.is_array()) {
      if (s.size() != dim) throw ConfigError(path + ": expected " + std::to_string(dim) + " coordinates");
      FunctionVector u(dim);
      for (std::size_t j = 0; j < dim; ++j) u[j] = as_double(s[j], path);
      if (u.norm() == 0.0) throw ConfigError(path + ": zero vector");
      out.push_back((1.0 / u.norm()) * u);
    } else {
      throw ConfigError(path + ": expected a name, {\"basis\": k} or a coordinate list");
    }
  }
  return out;
}

ExperimentConfig parse_config(const json& doc) {
  check_keys(doc, {"experiment", "model", "parameters", "thresholds", "seed", "output", "table_output"}, "config");
  ExperimentConfig c;
  c.kind = parse_kind(as_string(require(doc, "experiment", "config"), "experiment"));
  if (doc.contains("model")) c.model = doc.at("model");
  c.parameters = parse_parameters(doc.contains("parameters") ? doc.at("parameters") : json::object(), c.kind);
  if (doc.contains("thresholds")) {
    const json& t = doc.at("thresholds");
    if (!t.is_object()) throw ConfigError("thresholds: expected an object");
    for (const auto& [name, value] : t.items()) c.thresholds[name] = as_double(value, "thresholds." + name);
  }
  const json& seed = require(doc, "seed", "config");
  if (!seed.is_number_unsigned() && !(seed.is_number_integer() && seed.get<long long>() >= 0)) {
    throw ConfigError("seed: expected a non-negative integer");
  }
  c.seed = seed.get<std::uint64_t>();
  c.output = as_string(require(doc, "output", "config"), "output");
  if (c.output.empty()) throw ConfigError("output: must not be empty");
  if (doc.contains("table_output")) c.table_output = as_string(doc.at("table_output"), "table_output");

  if (c.model.is_null()) {
    validate(c, nullptr);
  } else {
    const ProcessModel model = build_model(c.model);
    validate(c, &model);
  }
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return parse_config(doc);
}

json to_json(const ExperimentConfig& c) {
  json doc;
  doc["experiment"] = to_string(c.kind);
  if (!c.model.is_null()) doc["model"] = c.model;
  json p = json::object();
  const Parameters& pr = c.parameters;
  if (pr.theta) p["theta"] = frequency_to_json(*pr.theta);
  if (pr.theta_prime) p["theta_prime"] = frequency_to_json(*pr.theta_prime);
  if (pr.n) p["n"] = *pr.n;
  if (pr.replications) p["R"] = *pr.replications;
  if (pr.max_lag) p["H"] = *pr.max_lag;
  if (pr.grid_size) p["G"] = *pr.grid_size;
  if (pr.horizon) p["T"] = *pr.horizon;
  if (pr.m_max) p["m_max"] = *pr.m_max;
  if (pr.n_values) p["n_values"] = *pr.n_values;
  if (pr.a2_n_values) p["a2_n_values"] = *pr.a2_n_values;
  if (pr.u) p["u"] = *pr.u;
  if (pr.provenance) p["provenance"] = to_string(*pr.provenance);
  if (pr.path_file) p["path_file"] = *pr.path_file;
  doc["parameters"] = std::move(p);
  if (!c.thresholds.empty()) doc["thresholds"] = c.thresholds;
  doc["seed"] = c.seed;
  doc["output"] = c.output;
  if (c.table_output) doc["table_output"] = *c.table_output;
  return doc;
}

}  // namespace fts::cli
