#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "fts/montecarlo.hpp"
#include "fts/stats.hpp"
#include "oracles.hpp"

using namespace fts;
using oracle::cd;

namespace {

constexpr double kPi = std::numbers::pi;

double grid_theta(long j, std::size_t n) { return 2.0 * kPi * static_cast<double>(j) / static_cast<double>(n); }

MonteCarloOptions opts(std::uint64_t seed, std::size_t threads = 1) {
  MonteCarloOptions o;
  o.seed = seed;
  o.threads = threads;
  return o;
}

LinearModel white_noise(std::size_t d) { return LinearModel::white_noise(InnovationSpec::standard(d)); }

}  // namespace

TEST(Normality, SelfTestOnReferenceDraws) {
  RngStream rng(1, 1);
  std::vector<double> x(4000);
  for (auto& v : x) v = std::sqrt(2.0) * rng.normal();
  const NormalityDiagnostics d = normality_diagnostics(x, 2.0);
  EXPECT_TRUE(within(d, NormalityThresholds{}));
  EXPECT_GE(d.variance_ratio, 0.9);
  EXPECT_LE(d.variance_ratio, 1.1);
  EXPECT_LE(std::abs(d.excess_kurtosis), 0.3);
  EXPECT_LE(d.ks, 0.035);
  EXPECT_LT(std::abs(d.standardized_mean), 4.0);
}

TEST(Normality, ConstantAndScaled) {
  const std::vector<double> constant(200, 1.5);
  const NormalityDiagnostics c = normality_diagnostics(constant, 1.0);
  EXPECT_TRUE(c.degenerate);
  EXPECT_EQ(c.variance_ratio, 0.0);
  EXPECT_FALSE(within(c, NormalityThresholds{}));

  RngStream rng(2, 1);
  std::vector<double> x(20000);
  for (auto& v : x) v = 2.0 * rng.normal();
  EXPECT_NEAR(normality_diagnostics(x, 1.0).variance_ratio, 4.0, 0.15);
  EXPECT_THROW(normality_diagnostics(std::vector<double>(50, 0.0), 1.0), std::invalid_argument);
  EXPECT_THROW(normality_diagnostics(x, 0.0), std::invalid_argument);
}

TEST(Stats, KsAgainstExactEdf) {
  // Four points: the sup is attained at a jump of the empirical cdf
  const std::vector<double> x = {-1.0, 0.0, 0.5, 2.0};
  double expected = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = 0.5 * std::erfc(-x[i] / std::sqrt(2.0));
    expected = std::max({expected, std::abs(f - i / 4.0), std::abs((i + 1) / 4.0 - f)});
  }
  EXPECT_NEAR(ks_distance_normal(x, 1.0), expected, 1e-15);
}

TEST(Stats, PairwiseSumAndMoments) {
  std::vector<double> v(1001);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<double>(i);
  EXPECT_EQ(pairwise_sum(v), 500500.0);
  const std::vector<double> w = {1.0, 2.0, 3.0, 4.0};
  const Moments m = moments(w);
  EXPECT_DOUBLE_EQ(m.mean, 2.5);
  EXPECT_DOUBLE_EQ(m.variance, 5.0 / 3.0);
  EXPECT_NEAR(m.skewness, 0.0, 1e-15);
  const std::vector<double> decay = {8.0, 4.0, 2.0, 1.0};
  const GeometricFit f = fit_geometric_decay(decay, 1);
  EXPECT_NEAR(f.rate, 0.5, 1e-14);
  EXPECT_NEAR(f.slope, std::log(0.5), 1e-14);
}

TEST(TestVectors, DefaultsAreUnitAndSeeded) {
  const auto a = default_test_vectors(5, 3);
  const auto b = default_test_vectors(5, 3);
  const auto c = default_test_vectors(5, 4);
  ASSERT_EQ(a.size(), 3u);
  for (const auto& u : a) EXPECT_NEAR(u.norm(), 1.0, 1e-14);
  EXPECT_EQ(a[0].coeffs(), FunctionVector::basis(5, 0).coeffs());
  EXPECT_EQ(a[2].coeffs(), b[2].coeffs());
  EXPECT_NE(a[2].coeffs(), c[2].coeffs());
}

TEST(Reference, ProvenanceConsistencyForLinearModels) {
  const LinearModel g = LinearModel::geometric(LinOperator::identity(2), 0.6, InnovationSpec::standard(2));
  for (double theta : {0.0, 1.0, kPi}) {
    const LinOperator closed = reference_operator(g, theta, Provenance::ClosedForm, 0, opts(1));
    const LinOperator lagsum = reference_operator(g, theta, Provenance::LagSum, 0, opts(1));
    EXPECT_LT(hs_norm(closed - lagsum), 1e-12 * hs_norm(closed));
  }
  EXPECT_NEAR(reference_operator(oracle::ma1(), 0.0, Provenance::ClosedForm, 0, opts(1))(0, 0).real(), 2.25, 1e-14);
  const LinearModel g1 = LinearModel::geometric(LinOperator::identity(1), 0.6, InnovationSpec::standard(1));
  EXPECT_NEAR(reference_operator(g1, 0.0, Provenance::ClosedForm, 0, opts(1))(0, 0).real(), 6.25, 1e-11);
  EXPECT_NEAR(reference_operator(g1, 0.0, Provenance::LagSum, 0, opts(1))(0, 0).real(), 6.25, 1e-11);
}

TEST(Reference, ArchNeedsMonteCarlo) {
  const ArchModel arch(Eigen::VectorXd::Constant(2, 0.5), Eigen::MatrixXd::Constant(2, 2, 0.1),
                       InnovationSpec::standard(2));
  EXPECT_THROW(reference_operator(arch, 1.0, Provenance::ClosedForm, 0, opts(1)), std::invalid_argument);
  MonteCarloOptions o = opts(1);
  o.pilot_length = 20000;
  const LinOperator ref = reference_operator(arch, 1.0, Provenance::MonteCarlo, 0, o);
  // ARCH is uncorrelated: 2 pi F = C_0 = diag(E sigma^2)
  const double s2 = arch.stationary_sigma2()(0);
  EXPECT_NEAR(ref(0, 0).real(), s2, 0.1 * s2);
}

TEST(Clt, WhiteNoiseCovarianceAndCircularity) {
  const std::size_t n = 256, reps = 4000, d = 4;
  const CltReport r = run_clt(white_noise(d), kPi / 3.0, n, reps, default_test_vectors(d, 42), Provenance::ClosedForm,
                              opts(42));
  const LinOperator v = LinOperator::identity(d);
  EXPECT_FALSE(r.real_mode);
  EXPECT_LE(hs_norm(r.gamma_hat - v) / hs_norm(v), 0.1);
  EXPECT_LE(hs_norm(r.relation_hat) / hs_norm(r.gamma_hat), 0.1);
  EXPECT_LE(std::abs(r.trace_mean - 4.0), 0.4);
  ASSERT_TRUE(r.finite_n_reference.has_value());
  EXPECT_LT(hs_norm(*r.finite_n_reference - v), 1e-14);
  for (const auto& ps : r.projections) {
    ASSERT_TRUE(ps.re && ps.im);
    EXPECT_NEAR(ps.reference_variance, 0.5, 1e-14);
    EXPECT_GE(ps.re->variance_ratio, 0.85);
    EXPECT_LE(ps.re->variance_ratio, 1.15);
    EXPECT_GE(ps.im->variance_ratio, 0.85);
    EXPECT_LE(ps.im->variance_ratio, 1.15);
    EXPECT_LE(std::abs(ps.corr_re_im), 0.1);
  }
}

TEST(Clt, ZeroModelGivesZeroStatistics) {
  const LinearModel zero({LinOperator::zero(2)}, InnovationSpec::standard(2));
  const CltReport r = run_clt(zero, 1.0, 16, 100, default_test_vectors(2, 1), Provenance::ClosedForm, opts(1));
  EXPECT_EQ(hs_norm(r.gamma_hat), 0.0);
  EXPECT_EQ(hs_norm(r.relation_hat), 0.0);
  EXPECT_EQ(r.trace_mean, 0.0);
  for (const auto& ps : r.projections) {
    EXPECT_EQ(ps.var_re, 0.0);
    EXPECT_FALSE(ps.re.has_value());
  }
  const CrossFreqReport c = run_cross_freq(zero, grid_theta(1, 16), grid_theta(3, 16), 16, 100,
                                           default_test_vectors(2, 1), opts(1));
  EXPECT_EQ(hs_norm(c.cross_cov), 0.0);
  EXPECT_EQ(c.normalized_cross_hs, 0.0);
}

TEST(Clt, FiniteNExactnessForWhiteNoise) {
  // E gamma_hat = V at every n; a tiny n still centres on V
  const CltReport r = run_clt(white_noise(1), 1.0, 8, 20000, {FunctionVector::basis(1, 0)}, Provenance::ClosedForm,
                              opts(5));
  EXPECT_NEAR(r.gamma_hat(0, 0).real(), 1.0, 4.0 * r.trace_se);
}

TEST(Clt, ValidatesArguments) {
  const auto us = default_test_vectors(2, 1);
  EXPECT_THROW(run_clt(white_noise(2), 1.0, 64, 99, us, Provenance::ClosedForm, opts(1)), std::invalid_argument);
  EXPECT_THROW(run_clt(white_noise(2), 1.0, 4, 100, us, Provenance::ClosedForm, opts(1)), std::invalid_argument);
  EXPECT_THROW(run_clt(white_noise(3), 1.0, 64, 100, us, Provenance::ClosedForm, opts(1)), std::invalid_argument);
  const std::vector<FunctionVector> not_unit = {2.0 * FunctionVector::basis(2, 0)};
  EXPECT_THROW(run_clt(white_noise(2), 1.0, 64, 100, not_unit, Provenance::ClosedForm, opts(1)), std::invalid_argument);
}

TEST(Clt, RealModeAtZeroAndPi) {
  const auto us = default_test_vectors(1, 1);
  const CltReport zero = run_theta0(oracle::ma1(), 64, 200, us, Provenance::ClosedForm, opts(2));
  EXPECT_TRUE(zero.real_mode);
  EXPECT_FALSE(zero.mode_note.empty());
  EXPECT_NEAR(zero.projections[0].reference_variance, 2.25, 1e-14);
  EXPECT_EQ(zero.projections[0].var_im, 0.0);
  const CltReport pi = run_clt(oracle::ma1(), kPi, 64, 200, us, Provenance::ClosedForm, opts(2));
  EXPECT_TRUE(pi.real_mode);
  EXPECT_NEAR(pi.projections[0].reference_variance, 0.25, 1e-14);
  EXPECT_FALSE(pi.projections[0].im.has_value());
}

TEST(Clt, DeterministicAcrossThreadCounts) {
  const auto us = default_test_vectors(3, 9);
  const LinearModel g = LinearModel::geometric(LinOperator::identity(3), 0.5, InnovationSpec::standard(3));
  const CltReport a = run_clt(g, 0.7, 64, 150, us, Provenance::ClosedForm, opts(9, 1));
  const CltReport b = run_clt(g, 0.7, 64, 150, us, Provenance::ClosedForm, opts(9, 4));
  EXPECT_EQ(a.gamma_hat.entries(), b.gamma_hat.entries());
  EXPECT_EQ(a.relation_hat.entries(), b.relation_hat.entries());
  EXPECT_EQ(a.trace_mean, b.trace_mean);
  for (std::size_t i = 0; i < us.size(); ++i) EXPECT_EQ(a.projections[i].re->ks, b.projections[i].re->ks);
}

TEST(CrossFreq, WhiteNoiseAndMa1Orthogonal) {
  const std::size_t n = 256, reps = 4000;
  for (const LinearModel& m : {white_noise(4), oracle::ma1()}) {
    const CrossFreqReport r = run_cross_freq(m, grid_theta(10, n), grid_theta(30, n), n, reps,
                                             default_test_vectors(m.dim(), 42), opts(42));
    EXPECT_LE(r.normalized_cross_hs, 0.1);
    for (cd c : r.projection_corr) EXPECT_LE(std::abs(c), 0.1);
  }
}

TEST(CrossFreq, Validation) {
  const auto us = default_test_vectors(1, 1);
  EXPECT_THROW(run_cross_freq(white_noise(1), 0.1, grid_theta(3, 64), 64, 100, us, opts(1)), std::invalid_argument);
  EXPECT_THROW(run_cross_freq(white_noise(1), grid_theta(3, 64), grid_theta(3, 64), 64, 100, us, opts(1)),
               std::invalid_argument);
}

TEST(KsProfile, ImprovesWithLength) {
  const LinearModel m = oracle::ma1(0.5, InnovationLaw::ScaledRademacher);
  const std::vector<std::size_t> ns = {16, 64, 256};
  const std::vector<double> ks =
      ks_profile(m, grid_theta(10, 256), ns, 4000, FunctionVector::basis(1, 0), Provenance::ClosedForm, opts(42));
  ASSERT_EQ(ks.size(), 3u);
  EXPECT_LE(ks[2], 0.05);
  EXPECT_LE(ks[2], ks[0]);
}
