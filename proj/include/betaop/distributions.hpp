#pragma once

// Exact samplers for the coefficient laws of the beta-ensemble matrix models:
//   Theta_nu          rotation-invariant law on the closed unit disk,
//   B_[0,1](s, t)     the usual Beta law,
//   B_[-1,1](s, t)    Beta law pushed to [-1, 1] with density
//                     proportional to (1 - x)^(s-1) (1 + x)^(t-1).

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <string>

#include "betaop/errors.hpp"
#include "betaop/random.hpp"

namespace betaop {

using cplx = std::complex<double>;

class ThetaParams {
 public:
  explicit ThetaParams(double nu) : nu_(nu) {
    if (!(nu >= 1.0)) {
      throw ParameterDomainError("Theta_nu requires nu >= 1, got " + std::to_string(nu));
    }
  }
  [[nodiscard]] double nu() const { return nu_; }

 private:
  double nu_;
};

class BetaSymParams {
 public:
  BetaSymParams(double s, double t) : s_(s), t_(t) {
    if (!(s > 0.0) || !(t > 0.0)) {
      throw ParameterDomainError("B_[-1,1](s,t) requires s, t > 0, got s=" + std::to_string(s) +
                                 ", t=" + std::to_string(t));
    }
  }
  [[nodiscard]] double s() const { return s_; }
  [[nodiscard]] double t() const { return t_; }

 private:
  double s_;
  double t_;
};

namespace detail {

template <class URBG>
double sample_gamma(double shape, URBG& rng) {
  std::gamma_distribution<double> gamma(shape, 1.0);
  return gamma(rng);
}

}  // namespace detail

/// Sample B_[0,1](s, t). t = 0 is the degenerate point mass at 1.
///
/// s = 1 uses the exact inverse CDF 1 - U^(1/t); otherwise the ratio
/// G_s / (G_s + G_t) of independent Gamma variables.
template <class URBG>
double sample_beta01(double s, double t, URBG& rng) {
  if (!(s > 0.0) || !(t >= 0.0)) {
    throw ParameterDomainError("B_[0,1](s,t) requires s > 0, t >= 0, got s=" + std::to_string(s) +
                               ", t=" + std::to_string(t));
  }
  if (t == 0.0) return 1.0;
  if (s == 1.0) {
    return -std::expm1(std::log(uniform_open_closed(rng)) / t);
  }
  for (;;) {
    const double gs = detail::sample_gamma(s, rng);
    const double gt = detail::sample_gamma(t, rng);
    const double total = gs + gt;
    if (total > 0.0) return gs / total;
  }
}

/// Sample B_[-1,1](s, t).
template <class URBG>
double sample_beta_sym(const BetaSymParams& params, URBG& rng) {
  for (;;) {
    const double gs = detail::sample_gamma(params.s(), rng);
    const double gt = detail::sample_gamma(params.t(), rng);
    const double total = gs + gt;
    if (!(total > 0.0)) continue;
    // (1 + x) / 2 = G_t / (G_s + G_t). Rounding can land exactly on an
    // endpoint, an event of probability zero for the exact law.
    const double x = (gt - gs) / total;
    if (x > -1.0 && x < 1.0) return x;
  }
}

/// Sample Theta_nu as e^{i phi} sqrt(X), phi uniform, X ~ B_[0,1](1, (nu-1)/2).
/// Theta_1 is uniform on the unit circle.
template <class URBG>
cplx sample_theta(const ThetaParams& params, URBG& rng) {
  const double phi = 2.0 * std::numbers::pi * uniform_closed_open(rng);
  const double radius = params.nu() == 1.0
                            ? 1.0
                            : std::sqrt(sample_beta01(1.0, 0.5 * (params.nu() - 1.0), rng));
  return std::polar(radius, phi);
}

template <class URBG>
cplx sample_theta(double nu, URBG& rng) {
  return sample_theta(ThetaParams(nu), rng);
}

inline double beta_sym_mean(const BetaSymParams& p) { return (p.t() - p.s()) / (p.t() + p.s()); }

inline double beta_sym_second_moment(const BetaSymParams& p) {
  const double sum = p.s() + p.t();
  const double diff = p.t() - p.s();
  return (diff * diff + sum) / (sum * (sum + 1.0));
}

/// 4st / ((s+t)^2 (s+t+1)).
inline double beta_sym_variance(const BetaSymParams& p) {
  const double sum = p.s() + p.t();
  return 4.0 * p.s() * p.t() / (sum * sum * (sum + 1.0));
}

/// E|z|^2 = 2 / (nu + 1) for z ~ Theta_nu.
inline double theta_second_moment(const ThetaParams& p) { return 2.0 / (p.nu() + 1.0); }

}  // namespace betaop
