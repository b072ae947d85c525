#include "fts/martingale.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "fts/dft.hpp"
#include "parallel.hpp"

namespace fts {

namespace {

const double kInvSqrtTwoPi = 1.0 / std::sqrt(2.0 * std::numbers::pi);

A3Report finish(std::vector<double> terms, bool exact, std::size_t replications) {
  A3Report report;
  report.partial_sum = pairwise_sum(terms);
  report.decay = fit_geometric_decay(std::span<const double>(terms).subspan(terms.size() > 1 ? 1 : 0),
                                     terms.size() > 1 ? 1 : 0);
  report.terms = std::move(terms);
  report.exact = exact;
  report.replications = replications;
  return report;
}

std::vector<double> linear_a3_terms(const LinearModel& model, std::size_t horizon) {
  const LinOperator& v = model.innovations().covariance();
  std::vector<double> terms(horizon + 1, 0.0);
  for (std::size_t t = 0; t <= horizon && t <= model.order(); ++t) {
    const double tr = trace(model.psi(t) * v * adjoint(model.psi(t))).real();
    terms[t] = std::sqrt(std::max(0.0, tr));
  }
  return terms;
}

CoupledPair coupled_draw(const ProcessModel& model, std::size_t m, RngStream& rng) {
  if (const auto* lin = std::get_if<LinearModel>(&model)) return detail::couple_unchecked(*lin, m, rng);
  if (const auto* dep = std::get_if<DependentErrorLinearModel>(&model)) {
    return detail::couple_unchecked(dep->as_iid_linear(), m, rng);
  }
  return detail::couple_unchecked(std::get<ArchModel>(model), m, rng);
}

// E[S_n(theta) | G_0] = sum_{t=1}^n exp(-i t theta) sum_{j>=t} Psi_j(eps_{t-j}).
FunctionVector conditional_part(const LinearModel& model, const LinearPathWithInnovations& sim, double theta) {
  const std::size_t n = sim.path.size();
  FunctionVector acc = FunctionVector::zero(model.dim());
  for (std::size_t t = 1; t <= n && t <= model.order(); ++t) {
    FunctionVector inner_sum = FunctionVector::zero(model.dim());
    for (std::size_t j = t; j <= model.order(); ++j) {
      inner_sum += apply(model.psi(j), sim.innovation(static_cast<long>(t) - static_cast<long>(j)));
    }
    acc += std::polar(1.0, -static_cast<double>(t) * theta) * inner_sum;
  }
  return acc;
}

}  // namespace

FunctionVector p0_linear(const LinearModel& model, long t, const FunctionVector& eps0) {
  if (t < 0) {
    throw std::out_of_range("p0_linear: t = " + std::to_string(t) + " < 0 (P_0(X_t) vanishes by adaptedness)");
  }
  if (static_cast<std::size_t>(t) > model.order()) return FunctionVector::zero(model.dim());
  return apply(model.psi(static_cast<std::size_t>(t)), eps0);
}

ProjectionSeries projection_series(const LinearModel& model, double theta, std::size_t n,
                                   const FunctionVector& eps0) {
  ProjectionSeries series;
  series.theta = theta;
  series.terms.reserve(n + 1);
  series.partial_sums.reserve(n + 1);
  FunctionVector running = FunctionVector::zero(model.dim());
  for (std::size_t t = 0; t <= n; ++t) {
    FunctionVector term = std::polar(1.0, -static_cast<double>(t) * theta) * p0_linear(model, static_cast<long>(t), eps0);
    running += term;
    series.partial_sums.push_back(kInvSqrtTwoPi * running);
    series.terms.push_back(std::move(term));
  }
  return series;
}

FunctionVector z_n(const LinearModel& model, double theta, std::size_t n, const FunctionVector& eps0) {
  FunctionVector acc = FunctionVector::zero(model.dim());
  for (std::size_t t = 0; t <= n && t <= model.order(); ++t) {
    acc += std::polar(1.0, -static_cast<double>(t) * theta) * p0_linear(model, static_cast<long>(t), eps0);
  }
  return kInvSqrtTwoPi * acc;
}

LinOperator z_limit_variance(const LinearModel& model, double theta) {
  // Z(theta) = (1/sqrt(2 pi)) A eps_0 with A = sum_t Psi_t e^{-i t theta},
  // accumulated by Horner's rule from the highest coefficient down.
  const Complex w = std::polar(1.0, -theta);
  CMatrix a = model.psi(model.order()).entries();
  for (std::size_t k = model.order(); k-- > 0;) a = (w * a + model.psi(k).entries()).eval();
  CMatrix var = a * model.innovations().covariance().entries() * a.adjoint();
  var /= 2.0 * std::numbers::pi;
  return LinOperator(std::move(var));
}

A3Report a3_sum(const LinearModel& model, std::size_t horizon) {
  return finish(linear_a3_terms(model, horizon), true, 0);
}

A3Report a3_sum(const DependentErrorLinearModel& model, std::size_t horizon) {
  // P_0(X_t) = sum_k Psi_k Phi_{t-k} eta_0 with eta the driver's i.i.d. noise.
  return finish(linear_a3_terms(model.as_iid_linear(), horizon), true, 0);
}

A3Report a3_sum(const ArchModel& model, std::size_t horizon, const RngStream& rng, std::size_t replications,
                std::size_t threads) {
  if (replications == 0) throw std::invalid_argument("a3_sum: R >= 1 required");
  const CouplingDecay decay = coupling_decay(ProcessModel(model), 0, horizon, rng, replications, threads);
  std::vector<double> terms(decay.nu2.size());
  for (std::size_t i = 0; i < terms.size(); ++i) terms[i] = 2.0 * decay.nu2[i];
  return finish(std::move(terms), false, replications);
}

A3Report a3_sum(const ProcessModel& model, std::size_t horizon, const RngStream& rng, std::size_t replications,
                std::size_t threads) {
  if (const auto* lin = std::get_if<LinearModel>(&model)) return a3_sum(*lin, horizon);
  if (const auto* dep = std::get_if<DependentErrorLinearModel>(&model)) return a3_sum(*dep, horizon);
  return a3_sum(std::get<ArchModel>(model), horizon, rng, replications, threads);
}

CouplingDecay coupling_decay(const ProcessModel& model, std::size_t first, std::size_t last, const RngStream& rng,
                             std::size_t replications, std::size_t threads) {
  if (last < first) throw std::invalid_argument("coupling_decay: empty lag range");
  if (replications == 0) throw std::invalid_argument("coupling_decay: R >= 1 required");
  CouplingDecay out;
  out.replications = replications;
  for (std::size_t m = first; m <= last; ++m) {
    const RngStream lag_stream = rng.substream(m);
    std::vector<double> sq(replications);
    detail::parallel_for(replications, threads, [&](std::size_t r) {
      RngStream stream(lag_stream.seed(), r + 1);
      const CoupledPair pair = coupled_draw(model, m, stream);
      sq[r] = (pair.original - pair.coupled).squared_norm();
    });
    out.lags.push_back(m);
    out.nu2.push_back(std::sqrt(pairwise_sum(sq) / static_cast<double>(replications)));
  }
  out.fit = fit_geometric_decay(out.nu2, first);
  return out;
}

DecompositionReport decompose(const LinearModel& model, const LinearPathWithInnovations& sim, double theta) {
  const std::size_t n = sim.path.size();
  DecompositionReport report;
  report.theta = theta;
  report.n = n;
  report.dft = dft_at(sim.path, theta).value;

  // Z^{(k)}_{n-k}(theta) has the law of Z_{n-k}(theta) with eps_k in place of eps_0.
  const double root_two_pi = std::sqrt(2.0 * std::numbers::pi);
  FunctionVector martingale = FunctionVector::zero(model.dim());
  for (std::size_t k = 1; k <= n; ++k) {
    const FunctionVector zk = z_n(model, theta, n - k, sim.innovation(static_cast<long>(k)));
    martingale += (root_two_pi * std::polar(1.0, -static_cast<double>(k) * theta)) * zk;
  }
  report.martingale_part = std::move(martingale);
  report.conditional_part = conditional_part(model, sim, theta);

  const FunctionVector residual = report.dft - (report.martingale_part + report.conditional_part);
  const double scale = report.dft.norm();
  report.relative_error = scale > 0.0 ? residual.norm() / scale : residual.norm();
  report.conditional_norm_sq_over_n = report.conditional_part.squared_norm() / static_cast<double>(n);
  return report;
}

DecompositionReport decomposition_check(const LinearModel& model, double theta, std::size_t n, RngStream& rng) {
  if (n == 0) throw std::invalid_argument("decomposition_check: n >= 1 required");
  return decompose(model, simulate_with_innovations(model, n, rng), theta);
}

std::vector<double> a2_profile(const LinearModel& model, double theta, const std::vector<std::size_t>& ns,
                               const RngStream& rng, std::size_t replications, std::size_t threads) {
  if (replications == 0) throw std::invalid_argument("a2_profile: R >= 1 required");
  std::vector<double> out;
  for (std::size_t n : ns) {
    if (n == 0) throw std::invalid_argument("a2_profile: n >= 1 required");
    std::vector<double> values(replications);
    detail::parallel_for(replications, threads, [&](std::size_t r) {
      RngStream stream(rng.seed(), r + 1);
      const LinearPathWithInnovations sim = simulate_with_innovations(model, n, stream);
      values[r] = conditional_part(model, sim, theta).squared_norm() / static_cast<double>(n);
    });
    out.push_back(pairwise_sum(values) / static_cast<double>(replications));
  }
  return out;
}

}  // namespace fts
