#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>

#include "fts/error.hpp"
#include "fts/models.hpp"
#include "fts/spectral.hpp"
#include "fts/stats.hpp"
#include "oracles.hpp"

using namespace fts;
using oracle::cd;

namespace {

ArchModel small_arch(double beta_scale, std::size_t d = 2) {
  const Eigen::Index n = static_cast<Eigen::Index>(d);
  return ArchModel(Eigen::VectorXd::Constant(n, 0.5), Eigen::MatrixXd::Constant(n, n, beta_scale),
                   InnovationSpec::standard(d));
}

}  // namespace

TEST(Simulate, WhiteNoiseEqualsInnovations) {
  const InnovationSpec innov = InnovationSpec::standard(3);
  const LinearModel wn = LinearModel::white_noise(innov);
  RngStream a(1, 1), b(1, 1);
  const SamplePath path = simulate(wn, 3, a);
  ASSERT_EQ(path.size(), 3u);
  for (std::size_t t = 1; t <= 3; ++t) EXPECT_EQ(path.at(t).coeffs(), innov.draw(b).coeffs());
}

TEST(Simulate, ZeroFilterGivesZeroPath) {
  const LinearModel zero({LinOperator::zero(2), LinOperator::zero(2)}, InnovationSpec::standard(2));
  RngStream rng(2, 1);
  for (const auto& x : simulate(zero, 50, rng).observations) EXPECT_EQ(x.norm(), 0.0);
}

TEST(Simulate, Ma1LagOneAutocovariance) {
  RngStream rng(3, 1);
  const SamplePath path = simulate(oracle::ma1(), 100000, rng);
  double c1 = 0.0;
  for (std::size_t t = 1; t < path.size(); ++t) c1 += (path.at(t + 1)[0] * std::conj(path.at(t)[0])).real();
  c1 /= static_cast<double>(path.size());
  EXPECT_NEAR(c1, 0.5, 0.02);
}

TEST(Simulate, SameStreamSamePath) {
  const ProcessModel models[] = {oracle::ma1(), small_arch(0.1)};
  for (const auto& m : models) {
    RngStream a(4, 9), b(4, 9);
    const SamplePath p = simulate(m, 64, a);
    const SamplePath q = simulate(m, 64, b);
    for (std::size_t t = 1; t <= 64; ++t) EXPECT_EQ(p.at(t).coeffs(), q.at(t).coeffs());
  }
}

TEST(Simulate, RealModelsGiveRealPaths) {
  RngStream rng(5, 1);
  const LinearModel g =
      LinearModel::geometric(LinOperator::identity(3), 0.6, InnovationSpec::standard(3, InnovationLaw::ScaledUniform));
  for (const auto& x : simulate(g, 20, rng).observations) EXPECT_EQ(x.coeffs().imag().norm(), 0.0);
}

TEST(Innovations, LawsShareSecondMoments) {
  Eigen::MatrixXd v(2, 2);
  v << 2.0, 0.6, 0.6, 1.0;
  for (InnovationLaw law : {InnovationLaw::Gaussian, InnovationLaw::ScaledUniform, InnovationLaw::ScaledRademacher}) {
    const InnovationSpec spec(LinOperator::from_real(v), law);
    RngStream rng(6, 1);
    Eigen::Matrix2d acc = Eigen::Matrix2d::Zero();
    const int draws = 200000;
    for (int i = 0; i < draws; ++i) {
      const Eigen::Vector2d x = spec.draw(rng).coeffs().real();
      acc += x * x.transpose();
    }
    acc /= draws;
    EXPECT_LT((acc - v).norm(), 0.03) << to_string(law);
  }
}

TEST(Innovations, ParseNames) {
  EXPECT_EQ(parse_innovation_law("gaussian"), InnovationLaw::Gaussian);
  EXPECT_EQ(parse_innovation_law("scaled-uniform"), InnovationLaw::ScaledUniform);
  EXPECT_EQ(parse_innovation_law("scaled-rademacher"), InnovationLaw::ScaledRademacher);
  EXPECT_THROW(parse_innovation_law("cauchy"), std::invalid_argument);
}

TEST(TheoreticalCov, Examples) {
  const LinearModel wn = LinearModel::white_noise(InnovationSpec::standard(2));
  EXPECT_EQ(hs_norm(theoretical_cov(wn, 0) - LinOperator::identity(2)), 0.0);
  EXPECT_EQ(hs_norm(theoretical_cov(wn, 1)), 0.0);
  EXPECT_NEAR(theoretical_cov(oracle::ma1(), 0)(0, 0).real(), 1.25, 1e-15);
  EXPECT_NEAR(theoretical_cov(oracle::ma1(), 1)(0, 0).real(), 0.5, 1e-15);
  EXPECT_EQ(hs_norm(theoretical_cov(oracle::ma1(), 2)), 0.0);
}

TEST(TheoreticalCov, MatchesBruteForceAndAdjointSymmetry) {
  RngStream rng(7, 0);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t d = 1 + trial % 3;
    std::vector<LinOperator> psi;
    for (int k = 0; k < 4; ++k) psi.push_back(oracle::random_real_operator(d, rng, 0.5));
    const LinOperator b = oracle::random_real_operator(d, rng);
    const LinearModel m(psi, InnovationSpec(b * adjoint(b)));
    for (long h = 0; h <= 5; ++h) {
      EXPECT_LT(oracle::hs_distance(theoretical_cov(m, h), oracle::linear_cov(m, h)), 1e-12);
      EXPECT_EQ(hs_norm(theoretical_cov(m, -h) - adjoint(theoretical_cov(m, h))), 0.0);
    }
  }
}

TEST(Geometric, TruncationAndKappa) {
  const LinearModel g = LinearModel::geometric(LinOperator::identity(1), 0.6, InnovationSpec::standard(1));
  const double tail = std::pow(0.6, static_cast<double>(g.order() + 1)) / 0.4;
  EXPECT_LT(tail, 1e-12);
  EXPECT_GE(std::pow(0.6, static_cast<double>(g.order())) / 0.4, 1e-12);
  for (std::size_t k = 0; k <= g.order(); ++k) EXPECT_NEAR(g.psi(k)(0, 0).real(), std::pow(0.6, k), 1e-15);
  EXPECT_NEAR(g.kappa(), 2.5, 1e-11);
  EXPECT_THROW(LinearModel::geometric(LinOperator::identity(1), 1.0, InnovationSpec::standard(1)),
               std::invalid_argument);
}

TEST(DependentError, CompositeFilterAndCovariance) {
  const LinearModel driver({LinOperator::identity(1), 0.4 * LinOperator::identity(1)}, InnovationSpec::standard(1));
  const DependentErrorLinearModel dep({LinOperator::identity(1), 0.5 * LinOperator::identity(1)}, driver);
  const LinearModel flat = dep.as_iid_linear();
  ASSERT_EQ(flat.order(), 2u);
  // (1 + 0.5 z)(1 + 0.4 z) = 1 + 0.9 z + 0.2 z^2
  EXPECT_NEAR(flat.psi(1)(0, 0).real(), 0.9, 1e-15);
  EXPECT_NEAR(flat.psi(2)(0, 0).real(), 0.2, 1e-15);
  for (long h = -3; h <= 3; ++h) {
    const oracle::Mat c = oracle::linear_cov(flat, std::labs(h));
    EXPECT_NEAR(theoretical_cov(dep, h)(0, 0).real(), c[0][0].real(), 1e-14) << h;
  }
}

TEST(Stationarity, HalvesAgree) {
  RngStream rng(8, 1);
  const LinearModel g = LinearModel::geometric(LinOperator::identity(2), 0.6, InnovationSpec::standard(2));
  const std::size_t n = 40000;
  const SamplePath path = simulate(g, n, rng);
  const double c0 = theoretical_cov(g, 0)(0, 0).real();
  auto second_moment = [&](std::size_t lo, std::size_t hi) {
    double s = 0.0;
    for (std::size_t t = lo; t <= hi; ++t) s += std::norm(path.at(t)[0]);
    return s / static_cast<double>(hi - lo + 1);
  };
  // Var of the lag-0 estimate for a Gaussian linear process is 2 sum_h C_h^2 / N.
  double sum_c2 = 0.0;
  for (long h = -60; h <= 60; ++h) sum_c2 += std::pow(theoretical_cov(g, h)(0, 0).real(), 2);
  const double sigma = std::sqrt(2.0 * sum_c2 / (n / 2.0));
  EXPECT_LT(std::abs(second_moment(1, n / 2) - second_moment(n / 2 + 1, n)), 4.0 * std::sqrt(2.0) * sigma);
  EXPECT_LT(std::abs(second_moment(1, n) - c0), 4.0 * sigma);
}

TEST(Stationarity, ErgodicMeanShrinks) {
  const LinearModel g = LinearModel::geometric(LinOperator::identity(1), 0.6, InnovationSpec::standard(1));
  // tr T = (sum rho^k)^2 = 6.25
  for (std::size_t n : {1000u, 16000u}) {
    RngStream rng(9, n);
    const SamplePath path = simulate(g, n, rng);
    cd mean = 0.0;
    for (const auto& x : path.observations) mean += x[0];
    mean /= static_cast<double>(n);
    EXPECT_LT(std::abs(mean), 4.0 * std::sqrt(6.25 / static_cast<double>(n)));
  }
}

TEST(Coupling, LinearExhaustedDependence) {
  const LinearModel m({LinOperator::identity(2), 0.3 * LinOperator::identity(2)}, InnovationSpec::standard(2));
  RngStream rng(10, 1);
  for (std::size_t mlag = 2; mlag < 5; ++mlag) {
    const CoupledPair p = couple_m_approximation(m, mlag, rng);
    EXPECT_EQ(p.original.coeffs(), p.coupled.coeffs());
  }
  EXPECT_THROW(couple_m_approximation(m, 0, rng), std::invalid_argument);
}

TEST(Coupling, LinearDifferenceFormula) {
  RngStream rng(11, 0);
  const LinOperator a = oracle::random_real_operator(3, rng);
  const LinearModel m({LinOperator::identity(3), a}, InnovationSpec::standard(3));
  const std::vector<FunctionVector> eps = {oracle::random_vector(3, rng, false), oracle::random_vector(3, rng, false)};
  const std::vector<FunctionVector> copy = {oracle::random_vector(3, rng, false),
                                            oracle::random_vector(3, rng, false)};
  const CoupledPair p = couple_linear(m, 1, eps, copy);
  EXPECT_LT((p.original - p.coupled - apply(a, eps[1] - copy[1])).norm(), 1e-14);
  EXPECT_LT((p.original - (eps[0] + apply(a, eps[1]))).norm(), 1e-14);
}

TEST(Coupling, ArchWithoutFeedbackIsIdentical) {
  const ArchModel arch = small_arch(0.0);
  RngStream rng(12, 1);
  for (std::size_t m = 1; m < 6; ++m) {
    const CoupledPair p = couple_m_approximation(arch, m, rng);
    EXPECT_EQ(p.original.coeffs(), p.coupled.coeffs());
  }
}

TEST(Coupling, MarginalSecondMomentsAgree) {
  const ArchModel arch = small_arch(0.2);
  const std::size_t draws = 20000;
  std::vector<double> a(draws), b(draws);
  RngStream rng(13, 1);
  for (std::size_t i = 0; i < draws; ++i) {
    const CoupledPair p = couple_m_approximation(arch, 2, rng);
    a[i] = p.original.squared_norm();
    b[i] = p.coupled.squared_norm();
  }
  const Moments ma = moments(a), mb = moments(b);
  const double se = std::sqrt((ma.variance + mb.variance) / draws);
  EXPECT_LT(std::abs(ma.mean - mb.mean), 4.0 * se * std::sqrt(2.0));
}

TEST(Arch, ContractionInvariant) {
  EXPECT_THROW(small_arch(0.6), NumericalError);  // |beta|_op = 1.2
  const ArchModel ok = small_arch(0.2);
  EXPECT_NEAR(ok.contraction_factor(), 0.4, 1e-12);
  // stationary E sigma^2 solves s = delta + beta s
  const Eigen::VectorXd s = ok.stationary_sigma2();
  EXPECT_LT((s - (ok.delta() + ok.beta() * s)).norm(), 1e-12);
  EXPECT_THROW(ArchModel(Eigen::VectorXd::Constant(2, -1.0), Eigen::MatrixXd::Zero(2, 2), InnovationSpec::standard(2)),
               std::invalid_argument);
}

TEST(Arch, StationaryVariance) {
  const ArchModel arch = small_arch(0.2);
  RngStream rng(14, 1);
  const SamplePath path = simulate(arch, 100000, rng);
  double m2 = 0.0;
  for (const auto& x : path.observations) m2 += std::norm(x[0]);
  m2 /= static_cast<double>(path.size());
  // E X^2 = E sigma^2 with unit-variance innovations
  EXPECT_NEAR(m2, arch.stationary_sigma2()(0), 0.03 * arch.stationary_sigma2()(0));
}

TEST(ReadPath, CommaAndWhitespace) {
  const auto file = std::filesystem::temp_directory_path() / "fts_read_path_test.txt";
  {
    std::ofstream out(file);
    out << "# header\n1.5, 2\n-3 4e-1\n\n0,0\n";
  }
  const SamplePath path = read_path_matrix(file.string());
  ASSERT_EQ(path.size(), 3u);
  ASSERT_EQ(path.dim(), 2u);
  EXPECT_EQ(path.at(2)[1], cd(0.4));
  {
    std::ofstream out(file);
    out << "1 2\n3\n";
  }
  EXPECT_THROW(read_path_matrix(file.string()), std::exception);
  std::filesystem::remove(file);
  EXPECT_THROW(read_path_matrix(file.string()), std::exception);
}
