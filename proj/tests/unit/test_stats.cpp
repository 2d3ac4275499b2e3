#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "betaop/random.hpp"
#include "betaop/stats.hpp"

using namespace betaop;

namespace {

std::vector<double> normals(std::size_t n, std::uint64_t seed) {
  Rng rng = substream(seed, 0, 0);
  std::normal_distribution<double> gauss;
  std::vector<double> out(n);
  for (double& x : out) x = gauss(rng);
  return out;
}

std::vector<double> ramp(std::size_t n, double offset) {
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = static_cast<double>(i) + offset;
  return out;
}

}  // namespace

TEST(KsTwoSample, IdenticalPools) {
  const auto xs = normals(100, 1);
  const auto r = ks_two_sample(SamplePool(xs), SamplePool(xs));
  EXPECT_EQ(r.statistic, 0.0);
  EXPECT_EQ(r.p_value, 1.0);
}

TEST(KsTwoSample, DisjointSupports) {
  const auto r = ks_two_sample(SamplePool(ramp(30, 0.0)), SamplePool(ramp(30, 100.0)));
  EXPECT_EQ(r.statistic, 1.0);
  EXPECT_LT(r.p_value, 1e-6);
}

TEST(KsDistance, HandEnumeratedSteps) {
  const std::vector<double> xs{1, 2, 3, 4}, ys{1.5, 2.5, 3.5, 4.5};
  EXPECT_DOUBLE_EQ(ks_distance(xs, ys), 0.25);
}

TEST(KsTwoSample, RejectsSmallPools) {
  EXPECT_THROW(ks_two_sample(SamplePool(ramp(24, 0)), SamplePool(ramp(100, 0))), ParameterDomainError);
}

TEST(KsTwoSample, SymmetricAndMonotoneInvariant) {
  const auto xs = normals(500, 2);
  const auto ys = normals(700, 3);
  const auto forward = ks_two_sample(SamplePool(xs), SamplePool(ys));
  const auto backward = ks_two_sample(SamplePool(ys), SamplePool(xs));
  EXPECT_EQ(forward.statistic, backward.statistic);
  EXPECT_EQ(forward.p_value, backward.p_value);
  std::vector<double> ex, ey;
  for (const double x : xs) ex.push_back(std::exp(x));
  for (const double y : ys) ey.push_back(std::exp(y));
  EXPECT_DOUBLE_EQ(ks_two_sample(SamplePool(ex), SamplePool(ey)).statistic, forward.statistic);
}

TEST(KolmogorovSurvival, KnownValues) {
  EXPECT_NEAR(kolmogorov_survival(1.36), 0.0494, 5e-4);
  EXPECT_NEAR(kolmogorov_survival(1.63), 0.0098, 2e-4);
  EXPECT_NEAR(kolmogorov_survival(0.5), 0.9639, 5e-4);
  // Both series agree where they meet.
  EXPECT_NEAR(kolmogorov_survival(1.18 - 1e-12), kolmogorov_survival(1.18), 1e-10);
}

TEST(SamplePool, RejectsNonFinite) {
  EXPECT_THROW(SamplePool({1.0, std::nan("")}), ParameterDomainError);
  EXPECT_THROW(SamplePool({1.0, INFINITY}), ParameterDomainError);
}

TEST(EmpiricalMoments, ConstantAndTwoPointPools) {
  const auto c = empirical_moments(SamplePool({2.5, 2.5, 2.5}), 4);
  EXPECT_EQ(c[1].value, 0.0);
  const auto two = empirical_moments(SamplePool({-1.0, 1.0}), 2);
  EXPECT_EQ(two[0].value, 0.0);
  EXPECT_EQ(two[1].value, 2.0);  // divisor n - 1
}

TEST(EmpiricalMoments, UnitVarianceConvention) {
  const auto m = empirical_moments(SamplePool({-1.0, 1.0, -1.0, 1.0}), 2);
  EXPECT_NEAR(m[1].value, 4.0 / 3.0, 1e-15);
}

TEST(EmpiricalMoments, NormalPool) {
  const auto xs = normals(100000, 4);
  const auto m = empirical_moments(SamplePool(xs), 4);
  EXPECT_LE(std::abs(m[0].value), 4.0 * m[0].standard_error);
  EXPECT_LE(std::abs(m[1].value - 1.0), 4.0 * m[1].standard_error);
  EXPECT_LE(std::abs(m[2].value), 4.0 * m[2].standard_error);
  EXPECT_LE(std::abs(m[3].value - 3.0), 4.0 * m[3].standard_error);
  const auto k = excess_kurtosis(SamplePool(xs));
  EXPECT_LE(std::abs(k.value), 4.0 * k.standard_error);
}

TEST(EmpiricalMoments, RejectsBadInput) {
  EXPECT_THROW(empirical_moments(SamplePool({1.0}), 2), ParameterDomainError);
  EXPECT_THROW(empirical_moments(SamplePool({1.0, 2.0}), 5), ParameterDomainError);
}

TEST(EmpiricalCovariance, EqualRowsAndDuplicatedColumn) {
  const std::vector<std::vector<double>> same(5, {1.0, 2.0});
  const auto zero = empirical_covariance(same);
  for (const auto& row : zero.cov) for (const double v : row) EXPECT_EQ(v, 0.0);

  const auto xs = normals(1000, 5);
  std::vector<std::vector<double>> rows;
  for (const double x : xs) rows.push_back({x, x});
  const auto cov = empirical_covariance(rows);
  EXPECT_DOUBLE_EQ(cov.cov[0][1], cov.cov[0][0]);
  EXPECT_NEAR(cov.correlation(0, 1), 1.0, 1e-12);
}

TEST(EmpiricalCovariance, IndependentNormals) {
  const auto xs = normals(100000, 6);
  const auto ys = normals(100000, 7);
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < xs.size(); ++i) rows.push_back({xs[i], ys[i]});
  const auto cov = empirical_covariance(rows);
  EXPECT_EQ(cov.cov[0][1], cov.cov[1][0]);
  EXPECT_LE(std::abs(cov.cov[0][1]), 4.0 * cov.se[0][1]);
  EXPECT_LE(std::abs(cov.cov[0][0] - 1.0), 4.0 * cov.se[0][0]);
}

TEST(EmpiricalCovariance, ShiftInvariantAndRagged) {
  const auto xs = normals(200, 8);
  std::vector<std::vector<double>> rows, shifted;
  for (std::size_t i = 0; i + 1 < xs.size(); i += 2) {
    rows.push_back({xs[i], xs[i + 1]});
    shifted.push_back({xs[i] + 100.0, xs[i + 1] - 7.0});
  }
  const auto a = empirical_covariance(rows);
  const auto b = empirical_covariance(shifted);
  EXPECT_NEAR(a.cov[0][1], b.cov[0][1], 1e-10);
  EXPECT_NEAR(a.cov[1][1], b.cov[1][1], 1e-10);
  const std::vector<std::vector<double>> ragged{{1.0, 2.0}, {1.0}};
  EXPECT_THROW(empirical_covariance(ragged), ParameterDomainError);
}

TEST(Correlation, Basic) {
  const std::vector<double> x{1, 2, 3, 4}, y{2, 4, 6, 8}, z{4, 3, 2, 1};
  EXPECT_NEAR(correlation(x, y), 1.0, 1e-15);
  EXPECT_NEAR(correlation(x, z), -1.0, 1e-15);
}
