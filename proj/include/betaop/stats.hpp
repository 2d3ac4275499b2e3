#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "betaop/errors.hpp"

namespace betaop {

class SamplePool {
 public:
  SamplePool(std::vector<double> values, std::string label = {})
      : values_(std::move(values)), label_(std::move(label)) {
    for (const double v : values_) {
      if (!std::isfinite(v)) throw ParameterDomainError("sample pool '" + label_ + "' holds a non-finite value");
    }
  }
  [[nodiscard]] std::span<const double> values() const { return values_; }
  [[nodiscard]] const std::string& label() const { return label_; }
  [[nodiscard]] std::size_t size() const { return values_.size(); }

 private:
  std::vector<double> values_;
  std::string label_;
};

/// Kolmogorov survival function Q(lambda) = P(K > lambda)
///   = 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 lambda^2).
/// Small lambda uses the dual theta-function series, which converges there.
inline double kolmogorov_survival(double lambda) {
  if (lambda <= 0.0) return 1.0;
  if (lambda < 1.18) {
    const double y = std::numbers::pi * std::numbers::pi / (8.0 * lambda * lambda);
    double cdf = 0.0;
    for (int k = 1; k <= 100; ++k) {
      const double odd = 2.0 * k - 1.0;
      cdf += std::exp(-odd * odd * y);
    }
    cdf *= std::sqrt(2.0 * std::numbers::pi) / lambda;
    return std::clamp(1.0 - cdf, 0.0, 1.0);
  }
  double q = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    q += (k % 2 == 1 ? term : -term);
  }
  return std::clamp(2.0 * q, 0.0, 1.0);
}

struct KsResult {
  double statistic = 0.0;  // D
  double p_value = 1.0;
};

/// Sup-distance between the empirical CDFs of two pools (ties handled).
inline double ks_distance(std::span<const double> xs, std::span<const double> ys) {
  if (xs.empty() || ys.empty()) throw ParameterDomainError("KS distance needs non-empty pools");
  std::vector<double> x(xs.begin(), xs.end());
  std::vector<double> y(ys.begin(), ys.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double nx = static_cast<double>(x.size());
  const double ny = static_cast<double>(y.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / nx - static_cast<double>(j) / ny));
  }
  return d;
}

/// Two-sample Kolmogorov-Smirnov test with the asymptotic p-value at
/// effective size n_x n_y / (n_x + n_y). Pools need >= 25 values.
inline KsResult ks_two_sample(const SamplePool& xs, const SamplePool& ys) {
  constexpr std::size_t kMinPool = 25;
  if (xs.size() < kMinPool || ys.size() < kMinPool) {
    throw ParameterDomainError("KS test needs at least 25 values per pool ('" + xs.label() +
                               "': " + std::to_string(xs.size()) + ", '" + ys.label() +
                               "': " + std::to_string(ys.size()) + ")");
  }
  const double d = ks_distance(xs.values(), ys.values());
  const double nx = static_cast<double>(xs.size());
  const double ny = static_cast<double>(ys.size());
  return {d, kolmogorov_survival(std::sqrt(nx * ny / (nx + ny)) * d)};
}

/// One-sample KS statistic and asymptotic p-value against a continuous CDF.
template <class Cdf>
KsResult ks_one_sample(const SamplePool& xs, Cdf&& cdf) {
  std::vector<double> x(xs.values().begin(), xs.values().end());
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = cdf(x[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return {d, kolmogorov_survival(std::sqrt(n) * d)};
}

struct MomentEstimate {
  double value = 0.0;
  double standard_error = 0.0;
};

namespace detail {

/// Central moments 2..4 from shifted power sums of n values.
struct PowerSums {
  double s1 = 0, s2 = 0, s3 = 0, s4 = 0;
  double n = 0;

  [[nodiscard]] double mean() const { return s1 / n; }
  [[nodiscard]] double variance() const {  // divisor n - 1
    const double m = mean();
    return (s2 - n * m * m) / (n - 1.0);
  }
  [[nodiscard]] double central(int order) const {  // divisor n
    const double m = mean();
    const double e2 = s2 / n;
    const double e3 = s3 / n;
    const double e4 = s4 / n;
    if (order == 3) return e3 - 3.0 * m * e2 + 2.0 * m * m * m;
    return e4 - 4.0 * m * e3 + 6.0 * m * m * e2 - 3.0 * m * m * m * m;
  }
  [[nodiscard]] PowerSums without(double x) const {
    const double x2 = x * x;
    return {s1 - x, s2 - x2, s3 - x2 * x, s4 - x2 * x2, n - 1.0};
  }
};

template <class Stat>
MomentEstimate jackknife(std::span<const double> shifted, const PowerSums& full, Stat&& stat) {
  const double n = full.n;
  const double whole = stat(full);
  double mean_loo = 0.0;
  std::vector<double> loo(shifted.size());
  for (std::size_t i = 0; i < shifted.size(); ++i) {
    loo[i] = stat(full.without(shifted[i]));
    mean_loo += loo[i];
  }
  mean_loo /= n;
  double acc = 0.0;
  for (const double v : loo) acc += (v - mean_loo) * (v - mean_loo);
  return {whole, std::sqrt((n - 1.0) / n * acc)};
}

inline std::pair<std::vector<double>, PowerSums> shifted_sums(std::span<const double> xs) {
  double center = 0.0;
  for (const double x : xs) center += x;
  center /= static_cast<double>(xs.size());
  std::vector<double> shifted(xs.size());
  PowerSums sums;
  sums.n = static_cast<double>(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double d = xs[i] - center;
    shifted[i] = d;
    const double d2 = d * d;
    sums.s1 += d;
    sums.s2 += d2;
    sums.s3 += d2 * d;
    sums.s4 += d2 * d2;
  }
  return {std::move(shifted), sums};
}

}  // namespace detail

/// Mean, variance (divisor n-1), then third and fourth central moments.
/// The mean's SE is s / sqrt(n); higher moments use delete-one jackknife SEs.
inline std::vector<MomentEstimate> empirical_moments(const SamplePool& xs, int upto) {
  if (xs.size() < 2) throw ParameterDomainError("empirical moments need at least 2 values");
  if (upto < 1 || upto > 4) throw ParameterDomainError("empirical moments support orders 1..4");
  double center = 0.0;
  for (const double x : xs.values()) center += x;
  center /= static_cast<double>(xs.size());
  auto [shifted, sums] = detail::shifted_sums(xs.values());
  std::vector<MomentEstimate> out;
  const double n = sums.n;
  const double var = std::max(0.0, sums.variance());
  out.push_back({center + sums.mean(), std::sqrt(var / n)});
  if (upto >= 2) {
    out.push_back(detail::jackknife(shifted, sums, [](const detail::PowerSums& p) {
      return p.variance();
    }));
    out.back().value = var;
  }
  for (int order = 3; order <= upto; ++order) {
    out.push_back(detail::jackknife(shifted, sums, [order](const detail::PowerSums& p) {
      return p.central(order);
    }));
  }
  return out;
}

/// m4 / m2^2 - 3 with a jackknife SE.
inline MomentEstimate excess_kurtosis(const SamplePool& xs) {
  if (xs.size() < 4) throw ParameterDomainError("excess kurtosis needs at least 4 values");
  auto [shifted, sums] = detail::shifted_sums(xs.values());
  return detail::jackknife(shifted, sums, [](const detail::PowerSums& p) {
    const double m2 = p.s2 / p.n - p.mean() * p.mean();
    return p.central(4) / (m2 * m2) - 3.0;
  });
}

struct CovarianceReport {
  std::size_t dim = 0;
  std::size_t trials = 0;
  std::vector<double> mean;
  std::vector<std::vector<double>> cov;  // divisor trials - 1
  std::vector<std::vector<double>> se;   // asymptotic SE of each entry

  [[nodiscard]] double correlation(std::size_t i, std::size_t j) const {
    const double denom = std::sqrt(cov[i][i] * cov[j][j]);
    return denom > 0.0 ? cov[i][j] / denom : 0.0;
  }
};

inline CovarianceReport empirical_covariance(std::span<const std::vector<double>> rows) {
  if (rows.size() < 2) throw ParameterDomainError("covariance needs at least 2 rows");
  const std::size_t dim = rows.front().size();
  for (const auto& row : rows) {
    if (row.size() != dim) throw ParameterDomainError("covariance rows have unequal lengths");
  }
  const double n = static_cast<double>(rows.size());
  CovarianceReport out;
  out.dim = dim;
  out.trials = rows.size();
  out.mean.assign(dim, 0.0);
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < dim; ++i) out.mean[i] += row[i];
  }
  for (double& m : out.mean) m /= n;
  out.cov.assign(dim, std::vector<double>(dim, 0.0));
  std::vector<std::vector<double>> fourth(dim, std::vector<double>(dim, 0.0));
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < dim; ++i) {
      const double di = row[i] - out.mean[i];
      for (std::size_t j = i; j < dim; ++j) {
        const double dj = row[j] - out.mean[j];
        out.cov[i][j] += di * dj;
        fourth[i][j] += di * di * dj * dj;
      }
    }
  }
  out.se.assign(dim, std::vector<double>(dim, 0.0));
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = i; j < dim; ++j) {
      const double biased = out.cov[i][j] / n;
      const double spread = std::max(0.0, fourth[i][j] / n - biased * biased);
      out.cov[i][j] /= (n - 1.0);
      out.cov[j][i] = out.cov[i][j];
      out.se[i][j] = out.se[j][i] = std::sqrt(spread / n);
    }
  }
  return out;
}

/// Pearson correlation of two equal-length series.
inline double correlation(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw ParameterDomainError("correlation needs two equal-length series of length >= 2");
  }
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  const double denom = std::sqrt(sxx * syy);
  return denom > 0.0 ? sxy / denom : 0.0;
}

}  // namespace betaop
