#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "fts/error.hpp"
#include "fts/hilbert.hpp"
#include "fts/rng.hpp"
#include "oracles.hpp"

using namespace fts;
using oracle::cd;

namespace {

FunctionVector e(std::size_t d, std::size_t k) { return FunctionVector::basis(d, k); }

}  // namespace

TEST(Inner, BasisVectors) {
  EXPECT_EQ(inner(e(3, 0), e(3, 0)), cd(1.0));
  EXPECT_EQ(inner(e(3, 0), e(3, 1)), cd(0.0));
  EXPECT_EQ(inner(cd(1.0, 1.0) * e(3, 0), e(3, 0)), cd(1.0, 1.0));
  // conjugate-linear in the second slot
  EXPECT_EQ(inner(e(3, 0), cd(1.0, 1.0) * e(3, 0)), cd(1.0, -1.0));
}

TEST(Inner, DimensionMismatchThrows) {
  EXPECT_THROW(inner(e(2, 0), e(3, 0)), DimensionMismatch);
  EXPECT_THROW(tensor(e(2, 0), e(3, 0)), DimensionMismatch);
  EXPECT_THROW(apply(LinOperator::identity(2), e(3, 0)), DimensionMismatch);
}

TEST(Tensor, RankOneAction) {
  EXPECT_LT((apply(tensor(e(2, 0), e(2, 0)), e(2, 0)) - e(2, 0)).norm(), 1e-15);
  EXPECT_LT((apply(tensor(e(2, 0), e(2, 1)), e(2, 1)) - e(2, 0)).norm(), 1e-15);
  EXPECT_LT(apply(tensor(e(2, 0), e(2, 1)), e(2, 0)).norm(), 1e-15);
}

TEST(Trace, Examples) {
  EXPECT_EQ(trace(LinOperator::identity(4)), cd(4.0));
  EXPECT_EQ(trace(tensor(e(3, 0), e(3, 1))), cd(0.0));
  const std::vector<double> diag = {1.0, 2.0, 3.0};
  EXPECT_EQ(trace(LinOperator::diagonal(diag)), cd(6.0));
}

TEST(Norms, Examples) {
  EXPECT_DOUBLE_EQ(hs_norm(LinOperator::identity(4)), 2.0);
  EXPECT_NEAR(op_norm(LinOperator::identity(4)), 1.0, 1e-14);
  const std::vector<double> diag = {1.0, -3.0};
  EXPECT_NEAR(op_norm(LinOperator::diagonal(diag)), 3.0, 1e-14);
  EXPECT_NEAR(schatten1_norm(LinOperator::identity(3)), 3.0, 1e-14);
  EXPECT_THROW(schatten1_norm(LinOperator::diagonal(diag)), std::invalid_argument);
}

TEST(Adjoint, RankOne) {
  RngStream rng(1, 0);
  const FunctionVector x = oracle::random_vector(3, rng);
  const FunctionVector y = oracle::random_vector(3, rng);
  EXPECT_LT(hs_norm(adjoint(tensor(x, y)) - tensor(y, x)), 1e-14);
}

TEST(NonnegSelfadjoint, Examples) {
  EXPECT_TRUE(is_nonneg_selfadjoint(LinOperator::identity(3), 1e-12));
  const std::vector<double> diag = {1.0, -1.0};
  EXPECT_FALSE(is_nonneg_selfadjoint(LinOperator::diagonal(diag), 1e-12));
  RngStream rng(2, 0);
  for (int i = 0; i < 20; ++i) {
    const FunctionVector x = oracle::random_vector(5, rng);
    EXPECT_TRUE(is_nonneg_selfadjoint(tensor(x, x), 1e-12));
  }
  EXPECT_FALSE(is_nonneg_selfadjoint(tensor(e(2, 0), e(2, 1)), 1e-12));
  EXPECT_THROW(is_nonneg_selfadjoint(LinOperator::identity(2), 0.0), std::invalid_argument);
}

TEST(LinOperator, NonSquareRejected) { EXPECT_THROW(LinOperator(CMatrix(2, 3)), std::invalid_argument); }

TEST(Properties, RandomInputs) {
  RngStream rng(3, 0);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t d = 1 + trial % 6;
    const FunctionVector x = oracle::random_vector(d, rng);
    const FunctionVector y = oracle::random_vector(d, rng);
    const LinOperator a = oracle::random_operator(d, rng);
    const LinOperator b = oracle::random_operator(d, rng);

    EXPECT_LT(std::abs(inner(x, y) - std::conj(inner(y, x))), 1e-12);
    EXPECT_LT(std::abs(trace(tensor(x, y)) - inner(x, y)), 1e-12 * (1.0 + x.norm() * y.norm()));
    EXPECT_LT(std::abs(trace(tensor(x, x)) - x.squared_norm()), 1e-12 * (1.0 + x.squared_norm()));
    EXPECT_GE(inner(x, x).real(), 0.0);
    EXPECT_EQ(inner(x, x).imag(), 0.0);
    EXPECT_EQ(hs_norm(adjoint(adjoint(a)) - a), 0.0);
    EXPECT_LT(hs_norm(adjoint(a * b) - adjoint(b) * adjoint(a)), 1e-12 * (1.0 + hs_norm(a) * hs_norm(b)));
    // conjugate-linearity of the adjoint
    const cd s(0.3, -1.7);
    EXPECT_LT(hs_norm(adjoint(s * a) - std::conj(s) * adjoint(a)), 1e-12 * (1.0 + hs_norm(a)));
    // <A x, y> = <x, A* y>
    EXPECT_LT(std::abs(inner(apply(a, x), y) - inner(x, apply(adjoint(a), y))),
              1e-11 * (1.0 + hs_norm(a) * x.norm() * y.norm()));
    const LinOperator h = a + adjoint(a);
    EXPECT_LT(std::abs(trace(h).imag()), 1e-12 * (1.0 + hs_norm(h)));
    EXPECT_LE(op_norm(a), hs_norm(a) * (1.0 + 1e-12));
  }
}

TEST(Sampling, ZeroCovarianceGivesZero) {
  RngStream rng(4, 0);
  for (int i = 0; i < 10; ++i) {
    EXPECT_EQ(sample_real_gaussian(LinOperator::zero(3), rng).norm(), 0.0);
    EXPECT_EQ(sample_complex_gaussian(LinOperator::zero(3), rng).norm(), 0.0);
  }
}

TEST(Sampling, DegenerateDirectionStaysZero) {
  RngStream rng(5, 0);
  const std::vector<double> diag = {4.0, 0.0};
  const LinOperator sigma = LinOperator::diagonal(diag);
  for (int i = 0; i < 1000; ++i) {
    const FunctionVector x = sample_real_gaussian(sigma, rng);
    EXPECT_EQ(x[1], cd(0.0));
    EXPECT_EQ(x[0].imag(), 0.0);
  }
}

TEST(Sampling, RealIdentityCovariance) {
  RngStream rng(6, 0);
  const std::size_t draws = 100000;
  oracle::Mat acc = oracle::zeros(2);
  for (std::size_t i = 0; i < draws; ++i) {
    const FunctionVector x = sample_real_gaussian(LinOperator::identity(2), rng);
    for (std::size_t r = 0; r < 2; ++r)
      for (std::size_t c = 0; c < 2; ++c) acc[r][c] += x[r] * std::conj(x[c]) / static_cast<double>(draws);
  }
  EXPECT_LT(oracle::hs_distance(LinOperator::identity(2), acc), 0.03);
}

TEST(Sampling, RankDeficientCovariance) {
  RngStream rng(7, 0);
  const FunctionVector v{cd(1.0), cd(2.0), cd(-1.0)};
  const LinOperator sigma = tensor(v, v);
  for (int i = 0; i < 100; ++i) {
    const FunctionVector x = sample_real_gaussian(sigma, rng);
    // x must be a multiple of v
    EXPECT_LT((x - (inner(x, v) / v.squared_norm()) * v).norm(), 1e-10 * (1.0 + x.norm()));
  }
}

TEST(Sampling, IndefiniteCovarianceRejected) {
  const std::vector<double> diag = {1.0, -0.5};
  EXPECT_THROW(GaussianFactor(LinOperator::diagonal(diag)), NumericalError);
}

TEST(Sampling, ComplexScalarIsCircular) {
  RngStream rng(8, 0);
  const std::size_t draws = 100000;
  std::vector<double> re(draws), im(draws);
  for (std::size_t i = 0; i < draws; ++i) {
    const FunctionVector x = sample_complex_gaussian(LinOperator::identity(1), rng);
    re[i] = x[0].real();
    im[i] = x[0].imag();
  }
  double srr = 0.0, sii = 0.0, sri = 0.0;
  for (std::size_t i = 0; i < draws; ++i) {
    srr += re[i] * re[i];
    sii += im[i] * im[i];
    sri += re[i] * im[i];
  }
  srr /= draws;
  sii /= draws;
  sri /= draws;
  EXPECT_NEAR(srr, 0.5, 0.02);
  EXPECT_NEAR(sii, 0.5, 0.02);
  EXPECT_NEAR(sri / std::sqrt(srr * sii), 0.0, 0.02);
}

TEST(Sampling, ComplexCovarianceAndRelation) {
  RngStream rng(9, 0);
  const std::size_t d = 4;
  const std::size_t draws = 100000;
  const LinOperator b = oracle::random_operator(d, rng);
  const LinOperator gamma = (1.0 / static_cast<double>(d)) * (b * adjoint(b));
  const GaussianFactor factor(gamma);
  oracle::Mat cov = oracle::zeros(d), rel = oracle::zeros(d);
  for (std::size_t i = 0; i < draws; ++i) {
    const FunctionVector x = factor.sample_complex(rng);
    for (std::size_t r = 0; r < d; ++r)
      for (std::size_t c = 0; c < d; ++c) {
        cov[r][c] += x[r] * std::conj(x[c]) / static_cast<double>(draws);
        rel[r][c] += x[r] * x[c] / static_cast<double>(draws);
      }
  }
  EXPECT_LT(oracle::hs_distance(gamma, cov), 0.05);
  EXPECT_LE(oracle::hs(rel), 4.0 * static_cast<double>(d) / std::sqrt(static_cast<double>(draws)));
}

TEST(Rng, Determinism) {
  RngStream a(123, 7), b(123, 7), c(123, 8);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const double x = a.normal();
    EXPECT_EQ(x, b.normal());
    differs |= x != c.normal();
  }
  EXPECT_TRUE(differs);
  const LinOperator sigma = LinOperator::identity(3);
  RngStream p(5, 1), q(5, 1);
  for (int i = 0; i < 10; ++i) {
    EXPECT_EQ(sample_complex_gaussian(sigma, p).coeffs(), sample_complex_gaussian(sigma, q).coeffs());
  }
}

TEST(Rng, SubstreamIgnoresPosition) {
  RngStream a(9, 2);
  const RngStream fresh = a.substream(4);
  for (int i = 0; i < 10; ++i) a.normal();
  RngStream later = a.substream(4);
  RngStream first = fresh;
  EXPECT_EQ(first.normal(), later.normal());
}

TEST(Rng, RademacherBalanced) {
  RngStream rng(10, 0);
  double sum = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double x = rng.rademacher();
    ASSERT_TRUE(x == 1.0 || x == -1.0);
    sum += x;
  }
  EXPECT_LT(std::abs(sum) / 100000.0, 0.01);
}
