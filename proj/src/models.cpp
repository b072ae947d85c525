#include "fts/models.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "fts/error.hpp"

namespace fts {

namespace {

double kappa_of(const std::vector<LinOperator>& psi) {
  double k = 0.0;
  for (const auto& p : psi) k += op_norm(p);
  return k;
}

void check_psi(const std::vector<LinOperator>& psi, std::size_t dim, const char* what) {
  if (psi.empty()) throw std::invalid_argument(std::string(what) + ": at least one filter coefficient required");
  for (const auto& p : psi) {
    if (p.dim() != dim) throw DimensionMismatch(what, p.dim(), dim);
  }
}

std::vector<FunctionVector> draw_innovations(const InnovationSpec& spec, std::size_t count, RngStream& rng) {
  std::vector<FunctionVector> eps;
  eps.reserve(count);
  for (std::size_t i = 0; i < count; ++i) eps.push_back(spec.draw(rng));
  return eps;
}

// X_t for t = 1..n from eps_{1-K}..eps_n stored at offset K.
std::vector<FunctionVector> filter(const std::vector<LinOperator>& psi, const std::vector<FunctionVector>& eps,
                                   std::size_t n) {
  const std::size_t order = psi.size() - 1;
  const std::size_t dim = psi.front().dim();
  std::vector<FunctionVector> out;
  out.reserve(n);
  for (std::size_t t = 0; t < n; ++t) {
    CVector x = CVector::Zero(static_cast<Eigen::Index>(dim));
    for (std::size_t k = 0; k <= order; ++k) x.noalias() += psi[k].entries() * eps[t + order - k].coeffs();
    out.emplace_back(std::move(x));
  }
  return out;
}

Eigen::VectorXd real_coeffs(const FunctionVector& x) { return x.coeffs().real(); }

}  // namespace

std::string_view to_string(InnovationLaw law) {
  switch (law) {
    case InnovationLaw::Gaussian:
      return "gaussian";
    case InnovationLaw::ScaledUniform:
      return "scaled-uniform";
    case InnovationLaw::ScaledRademacher:
      return "scaled-rademacher";
  }
  return "unknown";
}

InnovationLaw parse_innovation_law(std::string_view name) {
  if (name == "gaussian") return InnovationLaw::Gaussian;
  if (name == "scaled-uniform") return InnovationLaw::ScaledUniform;
  if (name == "scaled-rademacher") return InnovationLaw::ScaledRademacher;
  throw std::invalid_argument("unknown innovation distribution '" + std::string(name) +
                              "' (expected gaussian, scaled-uniform or scaled-rademacher)");
}

InnovationSpec::InnovationSpec(LinOperator covariance, InnovationLaw law)
    : covariance_(std::move(covariance)), law_(law), factor_(covariance_) {
  if (covariance_.dim() == 0) throw std::invalid_argument("innovation dimension must be positive");
  const double scale = 1.0 + hs_norm(covariance_);
  if (covariance_.entries().imag().norm() > 1e-12 * scale) {
    throw std::invalid_argument("innovation covariance must be real");
  }
  if (!is_nonneg_selfadjoint(covariance_, 1e-10)) {
    throw NumericalError("innovation covariance is not self-adjoint non-negative");
  }
}

FunctionVector InnovationSpec::draw(RngStream& rng) const {
  static const double kUniformScale = std::sqrt(3.0);
  CVector g(static_cast<Eigen::Index>(dim()));
  for (Eigen::Index j = 0; j < g.size(); ++j) {
    switch (law_) {
      case InnovationLaw::Gaussian:
        g(j) = rng.normal();
        break;
      case InnovationLaw::ScaledUniform:
        g(j) = kUniformScale * (2.0 * rng.uniform() - 1.0);
        break;
      case InnovationLaw::ScaledRademacher:
        g(j) = rng.rademacher();
        break;
    }
  }
  return factor_.map(g);
}

LinearModel::LinearModel(std::vector<LinOperator> psi, InnovationSpec innovations)
    : psi_(std::move(psi)), innovations_(std::move(innovations)) {
  check_psi(psi_, innovations_.dim(), "LinearModel");
  kappa_ = kappa_of(psi_);
}

LinearModel LinearModel::white_noise(InnovationSpec innovations) {
  const std::size_t d = innovations.dim();
  return LinearModel({LinOperator::identity(d)}, std::move(innovations));
}

LinearModel LinearModel::geometric(const LinOperator& base, double rho, InnovationSpec innovations,
                                   double tail_tol) {
  if (!(std::abs(rho) < 1.0)) throw std::invalid_argument("geometric model requires |rho| < 1");
  if (!(tail_tol > 0.0)) throw std::invalid_argument("geometric model requires tail_tol > 0");
  const double a = op_norm(base);
  std::vector<LinOperator> psi{base};
  // Tail after index K: |A| |rho|^{K+1} / (1 - |rho|).
  double power = 1.0;
  while (a * std::abs(power * rho) / (1.0 - std::abs(rho)) >= tail_tol) {
    power *= rho;
    psi.push_back(power * base);
  }
  return LinearModel(std::move(psi), std::move(innovations));
}

DependentErrorLinearModel::DependentErrorLinearModel(std::vector<LinOperator> psi, LinearModel error_driver)
    : psi_(std::move(psi)), driver_(std::move(error_driver)) {
  check_psi(psi_, driver_.dim(), "DependentErrorLinearModel");
  kappa_ = kappa_of(psi_);
}

LinearModel DependentErrorLinearModel::as_iid_linear() const {
  const auto& phi = driver_.psi();
  const std::size_t len = psi_.size() + phi.size() - 1;
  std::vector<LinOperator> combined(len, LinOperator::zero(dim()));
  for (std::size_t k = 0; k < psi_.size(); ++k) {
    for (std::size_t j = 0; j < phi.size(); ++j) combined[k + j] += psi_[k] * phi[j];
  }
  return LinearModel(std::move(combined), driver_.innovations());
}

ArchModel::ArchModel(Eigen::VectorXd delta, Eigen::MatrixXd beta, InnovationSpec innovations, std::size_t burn_in)
    : delta_(std::move(delta)), beta_(std::move(beta)), innovations_(std::move(innovations)), burn_in_(burn_in) {
  const auto d = static_cast<Eigen::Index>(innovations_.dim());
  if (delta_.size() != d) throw DimensionMismatch("ArchModel delta", static_cast<std::size_t>(delta_.size()), dim());
  if (beta_.rows() != d || beta_.cols() != d) {
    throw DimensionMismatch("ArchModel beta", static_cast<std::size_t>(beta_.rows()), dim());
  }
  if ((delta_.array() < 0.0).any()) throw std::invalid_argument("ArchModel delta must be coordinatewise >= 0");
  if ((beta_.array() < 0.0).any()) throw std::invalid_argument("ArchModel beta must have entries >= 0");

  const Eigen::VectorXd second_moment = innovations_.covariance().entries().diagonal().real();
  contraction_ = op_norm(LinOperator::from_real(beta_)) * second_moment.maxCoeff();
  if (!(contraction_ < 1.0)) {
    throw NumericalError("ARCH contraction violated: |beta|_op * max E eps^2 = " + std::to_string(contraction_) +
                         " must be < 1");
  }
  const Eigen::MatrixXd lhs = Eigen::MatrixXd::Identity(d, d) - beta_ * second_moment.asDiagonal();
  sigma2_mean_ = lhs.partialPivLu().solve(delta_);
}

Eigen::VectorXd ArchModel::step(Eigen::VectorXd& sigma2, const Eigen::VectorXd& eps) const {
  Eigen::VectorXd x = eps.cwiseProduct(sigma2.cwiseSqrt());
  sigma2 = delta_ + beta_ * x.cwiseAbs2();
  return x;
}

std::size_t model_dim(const ProcessModel& model) {
  return std::visit([](const auto& m) { return m.dim(); }, model);
}

std::string describe(const ProcessModel& model) {
  std::ostringstream os;
  if (const auto* lin = std::get_if<LinearModel>(&model)) {
    os << "linear(d=" << lin->dim() << ",K=" << lin->order() << "," << to_string(lin->innovations().law()) << ")";
  } else if (const auto* dep = std::get_if<DependentErrorLinearModel>(&model)) {
    os << "dependent-error(d=" << dep->dim() << ",K=" << dep->order() << ",driverK=" << dep->error_driver().order()
       << "," << to_string(dep->error_driver().innovations().law()) << ")";
  } else {
    const auto& arch = std::get<ArchModel>(model);
    os << "arch(d=" << arch.dim() << ",contraction=" << arch.contraction_factor() << ","
       << to_string(arch.innovations().law()) << ")";
  }
  return os.str();
}

const FunctionVector& LinearPathWithInnovations::innovation(long s) const {
  const long offset = s + static_cast<long>(order) - 1;
  if (offset < 0 || offset >= static_cast<long>(innovations.size())) {
    throw std::out_of_range("innovation index " + std::to_string(s) + " was not retained");
  }
  return innovations[static_cast<std::size_t>(offset)];
}

LinearPathWithInnovations simulate_with_innovations(const LinearModel& model, std::size_t n, RngStream& rng) {
  if (n == 0) throw std::invalid_argument("simulate: n >= 1 required");
  LinearPathWithInnovations out;
  out.order = model.order();
  out.innovations = draw_innovations(model.innovations(), model.order() + n, rng);
  out.path.observations = filter(model.psi(), out.innovations, n);
  out.path.model_id = describe(model);
  return out;
}

SamplePath simulate(const ProcessModel& model, std::size_t n, RngStream& rng) {
  if (n == 0) throw std::invalid_argument("simulate: n >= 1 required");
  if (const auto* lin = std::get_if<LinearModel>(&model)) {
    return simulate_with_innovations(*lin, n, rng).path;
  }
  if (const auto* dep = std::get_if<DependentErrorLinearModel>(&model)) {
    const SamplePath errors = simulate(ProcessModel(dep->error_driver()), dep->order() + n, rng);
    SamplePath path;
    path.observations = filter(dep->psi(), errors.observations, n);
    path.model_id = describe(model);
    return path;
  }
  const auto& arch = std::get<ArchModel>(model);
  SamplePath path;
  path.model_id = describe(model);
  path.burn_in = arch.burn_in();
  path.observations.reserve(n);
  Eigen::VectorXd sigma2 = arch.stationary_sigma2();
  for (std::size_t t = 0; t < arch.burn_in() + n; ++t) {
    const Eigen::VectorXd eps = real_coeffs(arch.innovations().draw(rng));
    Eigen::VectorXd x = arch.step(sigma2, eps);
    if (t >= arch.burn_in()) path.observations.emplace_back(CVector(x.cast<Complex>()));
  }
  return path;
}

LinOperator theoretical_cov(const LinearModel& model, long h) {
  if (h < 0) return adjoint(theoretical_cov(model, -h));
  const auto lag = static_cast<std::size_t>(h);
  LinOperator c = LinOperator::zero(model.dim());
  if (lag > model.order()) return c;
  const LinOperator& v = model.innovations().covariance();
  for (std::size_t k = 0; k + lag <= model.order(); ++k) c += model.psi(k + lag) * v * adjoint(model.psi(k));
  if (lag == 0) c = 0.5 * (c + adjoint(c));
  return c;
}

LinOperator theoretical_cov(const DependentErrorLinearModel& model, long h) {
  // C_h = sum_{j,k} Psi_j C^eps_{h-j+k} Psi_k*.
  const auto& psi = model.psi();
  LinOperator c = LinOperator::zero(model.dim());
  for (std::size_t j = 0; j < psi.size(); ++j) {
    for (std::size_t k = 0; k < psi.size(); ++k) {
      const long lag = h - static_cast<long>(j) + static_cast<long>(k);
      c += psi[j] * theoretical_cov(model.error_driver(), lag) * adjoint(psi[k]);
    }
  }
  if (h == 0) c = 0.5 * (c + adjoint(c));
  return c;
}

CoupledPair couple_linear(const LinearModel& model, std::size_t m, std::span<const FunctionVector> eps,
                          std::span<const FunctionVector> eps_copy) {
  const std::size_t len = model.order() + 1;
  if (eps.size() != len || eps_copy.size() != len) {
    throw std::invalid_argument("couple_linear: expected K + 1 = " + std::to_string(len) + " innovations");
  }
  FunctionVector x = FunctionVector::zero(model.dim());
  FunctionVector xm = FunctionVector::zero(model.dim());
  for (std::size_t k = 0; k < len; ++k) {
    x += apply(model.psi(k), eps[k]);
    xm += apply(model.psi(k), k < m ? eps[k] : eps_copy[k]);
  }
  return {std::move(x), std::move(xm)};
}

namespace detail {

CoupledPair couple_unchecked(const LinearModel& model, std::size_t m, RngStream& rng) {
  const std::size_t len = model.order() + 1;
  std::vector<FunctionVector> eps = draw_innovations(model.innovations(), len, rng);
  std::vector<FunctionVector> copy(len, FunctionVector::zero(model.dim()));
  for (std::size_t k = m; k < len; ++k) copy[k] = model.innovations().draw(rng);
  return couple_linear(model, m, eps, copy);
}

CoupledPair couple_unchecked(const ArchModel& model, std::size_t m, RngStream& rng) {
  // Innovations eps_{-(L-1)} .. eps_0 with L = m + burn-in; the oldest L - m
  // are swapped for an independent copy in the coupled run.
  const std::size_t len = m + model.burn_in() + 1;
  Eigen::VectorXd s_orig = model.stationary_sigma2();
  Eigen::VectorXd s_copy = model.stationary_sigma2();
  Eigen::VectorXd x, xm;
  for (std::size_t i = 0; i < len; ++i) {
    const std::size_t lag = len - 1 - i;  // this innovation is eps_{-lag}
    const Eigen::VectorXd eps = real_coeffs(model.innovations().draw(rng));
    if (lag < m) {
      x = model.step(s_orig, eps);
      xm = model.step(s_copy, eps);
    } else {
      const Eigen::VectorXd tilde = real_coeffs(model.innovations().draw(rng));
      x = model.step(s_orig, eps);
      xm = model.step(s_copy, tilde);
    }
  }
  return {FunctionVector(CVector(x.cast<Complex>())), FunctionVector(CVector(xm.cast<Complex>()))};
}

}  // namespace detail

CoupledPair couple_m_approximation(const LinearModel& model, std::size_t m, RngStream& rng) {
  if (m < 1) throw std::invalid_argument("couple_m_approximation: m >= 1 required");
  return detail::couple_unchecked(model, m, rng);
}

CoupledPair couple_m_approximation(const ArchModel& model, std::size_t m, RngStream& rng) {
  if (m < 1) throw std::invalid_argument("couple_m_approximation: m >= 1 required");
  return detail::couple_unchecked(model, m, rng);
}

SamplePath read_path_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open path matrix '" + path + "'");
  SamplePath out;
  out.model_id = "file:" + path;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line.front() == '#') continue;
    for (char& c : line) {
      if (c == ',') c = ' ';
    }
    std::istringstream fields(line);
    std::vector<double> row;
    double v = 0.0;
    while (fields >> v) row.push_back(v);
    if (!fields.eof()) throw std::runtime_error(path + ":" + std::to_string(lineno) + ": non-numeric field");
    if (row.empty()) continue;
    if (!out.observations.empty() && row.size() != out.dim()) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected " + std::to_string(out.dim()) +
                               " columns, got " + std::to_string(row.size()));
    }
    out.observations.push_back(FunctionVector::from_real(row));
  }
  if (out.observations.empty()) throw std::runtime_error("path matrix '" + path + "' has no rows");
  return out;
}

}  // namespace fts
