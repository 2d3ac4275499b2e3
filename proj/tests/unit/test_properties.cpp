// Randomised invariants over parameter sweeps.

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "betaop/campaigns.hpp"

using namespace betaop;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST(Properties, CmvUnitaryWithUnitSpectrum) {
  Rng rng = substream(70, 0, 0);
  for (int draw = 0; draw < 40; ++draw) {
    const std::size_t n = 1 + static_cast<std::size_t>(uniform_closed_open(rng) * 64);
    const double beta = 0.3 + 5.0 * uniform_closed_open(rng);
    const auto C = build_cmv(cmv_order(sample_cbe_alphas(n, beta, rng)));
    EXPECT_LT(unitarity_defect(C.dense), 1e-12);
    const Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(C.dense, false);
    double log_abs = 0.0;
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) log_abs += std::log(std::abs(solver.eigenvalues()(i)));
    EXPECT_NEAR(log_abs, 0.0, 1e-8);
    EXPECT_EQ(eig_unitary_cmv(C).size(), n);
  }
}

TEST(Properties, JacobiSpectrumInsideInterval) {
  Rng rng = substream(71, 0, 0);
  for (int draw = 0; draw < 40; ++draw) {
    const std::size_t n = 1 + static_cast<std::size_t>(uniform_closed_open(rng) * 200);
    const double beta = 0.3 + 5.0 * uniform_closed_open(rng);
    const double a = -0.95 + 3.0 * uniform_closed_open(rng);
    const double b = -0.95 + 3.0 * uniform_closed_open(rng);
    const auto J = build_jacobi(sample_jbe_alphas(n, beta, a, b, rng));
    for (const double off : J.offdiag) EXPECT_GT(off, 0.0);
    const auto eig = eig_tridiag(J);
    ASSERT_EQ(eig.size(), n);
    EXPECT_GE(eig.front(), -2.0 - 1e-8);
    EXPECT_LE(eig.back(), 2.0 + 1e-8);
  }
}

TEST(Properties, DeterminantIdentitiesOnRandomDraws) {
  const auto det = determinant_identities(30, 64, 72, 1);
  EXPECT_LT(det.charpoly_circular, 1e-8);
  EXPECT_LT(det.charpoly_jacobi, 1e-8);
  EXPECT_LT(det.edge_determinant, 1e-8);
  EXPECT_LT(det.edge_product, 1e-10);
}

TEST(Properties, CampaignsIndependentOfThreadCount) {
  const auto t1 = theorem1_circular(4, 2.0, 0.5, 200, 73, 1);
  const auto t3 = theorem1_circular(4, 2.0, 0.5, 200, 73, 3);
  for (std::size_t i = 0; i < t1.size(); ++i) {
    EXPECT_EQ(t1[i].ks.statistic, t3[i].ks.statistic);
    EXPECT_EQ(t1[i].ks.p_value, t3[i].ks.p_value);
  }
  const auto c1 = clt_jacobi(2.0, -0.5, -0.5, {8, 32}, {0.0, 1.0}, 50, 74, 1);
  const auto c4 = clt_jacobi(2.0, -0.5, -0.5, {8, 32}, {0.0, 1.0}, 50, 74, 4);
  for (std::size_t i = 0; i < c1.rows.size(); ++i) {
    EXPECT_EQ(c1.rows[i].re_var, c4.rows[i].re_var);
    EXPECT_EQ(c1.rows[i].im_mean, c4.rows[i].im_mean);
  }
}

TEST(Properties, CltCheckpointsArePrefixes) {
  const auto both = clt_jacobi(2.0, -0.5, 0.5, {8, 16}, {1.0}, 30, 75, 1);
  const auto only = clt_jacobi(2.0, -0.5, 0.5, {16}, {1.0}, 30, 75, 1);
  EXPECT_EQ(both.row(1, 0).re_mean, only.row(0, 0).re_mean);
  EXPECT_EQ(both.row(1, 0).im_var, only.row(0, 0).im_var);
}

TEST(Properties, CircularCampaignMatchesEigenvalueStatistic) {
  // Each size is a fresh CMV draw; the campaign value equals the statistic
  // of that matrix's eigenvalues at every theta.
  const std::vector<std::size_t> sizes{5, 12};
  const std::vector<double> thetas{2.0, 2.7};
  const double beta = 1.5;
  const std::size_t trials = 3;
  const auto clt = clt_circular(beta, sizes, thetas, trials, 76, 1);
  for (std::size_t s = 0; s < sizes.size(); ++s) {
    for (std::size_t t = 0; t < thetas.size(); ++t) {
      double re = 0.0, im = 0.0;
      for (std::size_t i = 0; i < trials; ++i) {
        Rng rng = substream(76, streams::kClt, i);
        for (std::size_t skip = 0; skip < s; ++skip) (void)sample_cbe_alphas(sizes[skip], beta, rng);
        const auto spec = EnsembleSpec::circular(sizes[s], beta);
        const auto points = cbe_points_from_alphas(spec, sample_cbe_alphas(sizes[s], beta, rng));
        const auto z = linear_statistic_circular(points, thetas[t]).raw;
        re += z.real();
        im += z.imag();
      }
      const double scale = std::sqrt(std::log(static_cast<double>(sizes[s]))) * static_cast<double>(trials);
      EXPECT_NEAR(clt.row(s, t).re_mean, re / scale, 1e-9);
      EXPECT_NEAR(clt.row(s, t).im_mean, im / scale, 1e-9);
    }
  }
}

TEST(Properties, JacobiCheckpointMatchesDirectStatistic) {
  const std::size_t n = 9;
  const double beta = 2.0, a = -0.5, b = 0.25;
  const std::size_t trials = 3;
  const auto spec = EnsembleSpec::jacobi(n, beta, a, b);
  for (const double theta : {0.0, kPi / 2, kPi}) {
    const auto clt = clt_jacobi(beta, a, b, {n}, {theta}, trials, 77, 1);
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < trials; ++i) {
      Rng rng = substream(77, streams::kClt, i);
      const auto z = linear_statistic_jacobi(sample_jbe_alphas(n, beta, a, b, rng), theta, spec).centered;
      re += z.real();
      im += z.imag();
    }
    const double scale = std::sqrt(std::log(static_cast<double>(n))) * static_cast<double>(trials);
    EXPECT_NEAR(clt.row(0, 0).re_mean, re / scale, 1e-11) << theta;
    EXPECT_NEAR(clt.row(0, 0).im_mean, im / scale, 1e-11) << theta;
  }
}

TEST(Properties, JacobiEdgeStatisticIsReal) {
  Rng rng = substream(78, 0, 0);
  for (int draw = 0; draw < 50; ++draw) {
    const auto spec = EnsembleSpec::jacobi(1 + static_cast<std::size_t>(draw), 1.0 + uniform_closed_open(rng), 0.2, 0.4);
    const auto alphas = sample_jbe_alphas(spec.n, spec.beta, spec.a, spec.b, rng);
    EXPECT_EQ(linear_statistic_jacobi(alphas, 0.0, spec).raw.imag(), 0.0);
    // At theta = pi the -i n pi shift cancels the boundary phase mod 2 pi.
    const auto at_pi = linear_statistic_jacobi(alphas, kPi, spec).centered;
    EXPECT_NEAR(at_pi.imag(), 0.0, 1e-9);
  }
}
