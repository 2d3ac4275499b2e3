#pragma once

// Ground truth that does not go through the matrix models: the joint
// densities themselves, their partition function, exact small-n rejection
// samplers, and deterministic quadrature for the per-step moments of the
// linearized phase increments.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "betaop/distributions.hpp"
#include "betaop/ensembles.hpp"
#include "betaop/errors.hpp"
#include "betaop/quadrature.hpp"
#include "betaop/random.hpp"
#include "betaop/stats.hpp"
#include "betaop/summation.hpp"

namespace betaop {

/// log of |Delta|^beta (circular, points are angles) or
/// |Delta|^beta prod (2-x)^a (2+x)^b (Jacobi). -inf marks a zero density.
inline double log_density(std::span<const double> points, const EnsembleSpec& spec) {
  if (points.size() != spec.n) {
    throw ParameterDomainError("density needs exactly n = " + std::to_string(spec.n) + " points");
  }
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  double acc = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      const double gap = spec.kind == EnsembleKind::circular
                             ? 2.0 * std::abs(std::sin(0.5 * (points[j] - points[i])))
                             : std::abs(points[j] - points[i]);
      if (gap == 0.0) return kNegInf;
      acc += spec.beta * std::log(gap);
    }
  }
  if (spec.kind == EnsembleKind::jacobi) {
    for (const double x : points) {
      if (x < -2.0 || x > 2.0) return kNegInf;
      const auto edge = [&](double distance, double exponent) {
        if (exponent == 0.0) return 0.0;
        if (distance == 0.0) {
          if (exponent < 0.0) {
            throw InfiniteDensity("Jacobi density is infinite at the edge x = " + std::to_string(x));
          }
          return kNegInf;
        }
        return exponent * std::log(distance);
      };
      acc += edge(2.0 - x, spec.a) + edge(2.0 + x, spec.b);
    }
  }
  return acc;
}

inline double density_eval(std::span<const double> points, const EnsembleSpec& spec) {
  return std::exp(log_density(points, spec));
}

/// Z_n^beta = Gamma(n beta/2 + 1) / Gamma(beta/2 + 1)^n.
inline double partition_circular(std::size_t n, double beta) {
  EnsembleSpec::circular(n, beta);
  const double nn = static_cast<double>(n);
  return std::exp(std::lgamma(nn * beta / 2.0 + 1.0) - nn * std::lgamma(beta / 2.0 + 1.0));
}

/// Periodic trapezoidal estimate of the integral of |Delta|^beta against
/// d eta / (2 pi) per coordinate, n <= 2.
inline double quadrature_partition_circular(std::size_t n, double beta, std::size_t gridsize) {
  EnsembleSpec::circular(n, beta);
  if (n > 2) throw ParameterDomainError("quadrature partition function supports n <= 2");
  if (n == 1) return 1.0;
  if (gridsize < 2) throw ParameterDomainError("gridsize must be >= 2");
  const double h = 2.0 * std::numbers::pi / static_cast<double>(gridsize);
  CompensatedSum acc;
  for (std::size_t i = 0; i < gridsize; ++i) {
    for (std::size_t j = 0; j < gridsize; ++j) {
      const double diff = h * (static_cast<double>(i) - static_cast<double>(j));
      acc.add(std::pow(2.0 * std::abs(std::sin(0.5 * diff)), beta));
    }
  }
  const double g = static_cast<double>(gridsize);
  return acc.value() / (g * g);
}

/// Exact sampler for the joint densities at n <= 3 by rejection.
///
/// Proposal: independent uniform angles (circular) or x = 2 alpha with
/// alpha ~ B_[-1,1](a+1, b+1) per coordinate (Jacobi), which carries the
/// edge weights, so the acceptance ratio is |Delta|^beta in both cases.
class RejectionSampler {
 public:
  static constexpr std::size_t kMaxPoints = 3;
  static constexpr double kMargin = 1e-2;
  static constexpr double kMinAcceptance = 1e-6;

  explicit RejectionSampler(const EnsembleSpec& spec) : spec_(spec) {
    spec_.validate();
    if (spec_.n > kMaxPoints) {
      throw ParameterDomainError("rejection sampling supports n <= 3, got " +
                                 std::to_string(spec_.n));
    }
    log_bound_ = (spec_.kind == EnsembleKind::circular ? circular_log_sup() : jacobi_log_sup()) +
                 kMargin;
  }

  template <class URBG>
  PointSample sample(URBG& rng) {
    std::vector<double> points(spec_.n);
    for (;;) {
      ++proposals_;
      if (proposals_ > 10'000'000 && acceptance_rate() < kMinAcceptance) {
        throw ConfigError("rejection sampler acceptance rate collapsed to " +
                          std::to_string(acceptance_rate()) + " for beta=" +
                          std::to_string(spec_.beta));
      }
      for (double& p : points) {
        if (spec_.kind == EnsembleKind::circular) {
          p = 2.0 * std::numbers::pi * uniform_closed_open(rng);
        } else {
          p = 2.0 * sample_beta_sym(BetaSymParams(spec_.a + 1.0, spec_.b + 1.0), rng);
        }
      }
      const double log_ratio = log_vandermonde(points);
      if (std::log(uniform_open_closed(rng)) <= log_ratio - log_bound_) {
        ++accepted_;
        std::sort(points.begin(), points.end());
        return {spec_, points};
      }
    }
  }

  [[nodiscard]] double acceptance_rate() const {
    return proposals_ == 0 ? 1.0
                           : static_cast<double>(accepted_) / static_cast<double>(proposals_);
  }
  [[nodiscard]] double log_bound() const { return log_bound_; }

 private:
  [[nodiscard]] double log_vandermonde(std::span<const double> points) const {
    EnsembleSpec bare = spec_;
    bare.a = bare.b = 0.0;
    return log_density(points, bare);
  }

  // Roots of unity maximise |Delta| on the circle: |Delta|^2 = n^n.
  [[nodiscard]] double circular_log_sup() const {
    const double n = static_cast<double>(spec_.n);
    return spec_.beta * 0.5 * n * std::log(n);
  }

  // Coarse grid on [-2, 2]^n that includes the endpoints and 0.
  [[nodiscard]] double jacobi_log_sup() const {
    constexpr int kGrid = 41;
    std::vector<double> grid(kGrid);
    for (int i = 0; i < kGrid; ++i) grid[i] = -2.0 + 4.0 * i / (kGrid - 1);
    double best = -std::numeric_limits<double>::infinity();
    std::vector<double> pts(spec_.n);
    std::vector<int> idx(spec_.n, 0);
    for (;;) {
      for (std::size_t k = 0; k < spec_.n; ++k) pts[k] = grid[static_cast<std::size_t>(idx[k])];
      best = std::max(best, log_vandermonde(pts));
      std::size_t k = 0;
      while (k < spec_.n && ++idx[k] == kGrid) idx[k++] = 0;
      if (k == spec_.n) break;
    }
    return best;
  }

  EnsembleSpec spec_;
  double log_bound_ = 0.0;
  std::size_t proposals_ = 0;
  std::size_t accepted_ = 0;
};

template <class URBG>
PointSample rejection_sample(const EnsembleSpec& spec, URBG& rng) {
  RejectionSampler sampler(spec);
  return sampler.sample(rng);
}

enum class UpsilonPair { re_re, re_im, im_im };

inline const char* to_string(UpsilonPair pair) {
  switch (pair) {
    case UpsilonPair::re_re: return "ReRe";
    case UpsilonPair::re_im: return "ReIm";
    case UpsilonPair::im_im: return "ImIm";
  }
  return "?";
}

using CoefficientLaw = std::variant<ThetaParams, BetaSymParams>;

namespace detail {

inline double upsilon_pair_product(cplx first, cplx second, UpsilonPair pair) {
  switch (pair) {
    case UpsilonPair::re_re: return first.real() * second.real();
    case UpsilonPair::re_im: return first.real() * second.imag();
    case UpsilonPair::im_im: return first.imag() * second.imag();
  }
  return 0.0;
}

inline const QuadratureRule& oracle_rule() {
  static const QuadratureRule rule = gauss_legendre(32);
  return rule;
}

inline const QuadratureRule& angular_rule() {
  static const QuadratureRule rule = gauss_legendre(256);
  return rule;
}

}  // namespace detail

/// E[chi(psi, alpha) chi'(phi, alpha)] for the centred increment
///   Upsilon~(psi, alpha) = -alpha e^{i psi}          (alpha ~ Theta_nu)
///   Upsilon~(psi, alpha) = -(alpha - E alpha) e^{i psi}  (alpha ~ B_[-1,1](s,t))
/// by deterministic quadrature: polar (radial Beta weight mapped out) over
/// the disk, or the mapped Beta integral over [-1, 1].
inline double upsilon_moment_oracle(const CoefficientLaw& law, double psi, double phi,
                                    UpsilonPair pair) {
  const cplx rot_psi = std::polar(1.0, psi);
  const cplx rot_phi = std::polar(1.0, phi);
  if (const auto* theta = std::get_if<ThetaParams>(&law)) {
    const auto angular = [&](double radius) {
      return integrate(
                 [&](double omega) {
                   const cplx alpha = std::polar(radius, omega);
                   return detail::upsilon_pair_product(-alpha * rot_psi, -alpha * rot_phi, pair);
                 },
                 0.0, 2.0 * std::numbers::pi, detail::angular_rule()) /
             (2.0 * std::numbers::pi);
    };
    if (theta->nu() == 1.0) return angular(1.0);
    // |alpha|^2 ~ B_[0,1](1, (nu - 1) / 2)
    return beta_expectation(
        1.0, 0.5 * (theta->nu() - 1.0), [&](double w) { return angular(std::sqrt(w)); },
        detail::oracle_rule());
  }
  const auto& sym = std::get<BetaSymParams>(law);
  // (1 + alpha) / 2 ~ B_[0,1](t, s)
  const double mean =
      beta_expectation(sym.t(), sym.s(), [](double y) { return 2.0 * y - 1.0; },
                       detail::oracle_rule());
  return beta_expectation(
      sym.t(), sym.s(),
      [&](double y) {
        const double centred = 2.0 * y - 1.0 - mean;
        return detail::upsilon_pair_product(-centred * rot_psi, -centred * rot_phi, pair);
      },
      detail::oracle_rule());
}

/// Closed forms that direct integration yields:
///   Theta_nu:   cos(psi-phi)/(nu+1) for ReRe and ImIm, sin(phi-psi)/(nu+1) for ReIm
///   B_[-1,1]:   2st/((s+t)^2 (s+t+1)) times
///               cos(psi-phi) + cos(psi+phi)   (ReRe)
///               cos(psi-phi) - cos(psi+phi)   (ImIm)
///               sin(psi+phi) - sin(psi-phi)   (ReIm)
inline double upsilon_moment_closed_form(const CoefficientLaw& law, double psi, double phi,
                                         UpsilonPair pair) {
  if (const auto* theta = std::get_if<ThetaParams>(&law)) {
    const double scale = 1.0 / (theta->nu() + 1.0);
    return pair == UpsilonPair::re_im ? scale * std::sin(phi - psi) : scale * std::cos(psi - phi);
  }
  const auto& sym = std::get<BetaSymParams>(law);
  const double scale = 0.5 * beta_sym_variance(sym);
  switch (pair) {
    case UpsilonPair::re_re: return scale * (std::cos(psi - phi) + std::cos(psi + phi));
    case UpsilonPair::im_im: return scale * (std::cos(psi - phi) - std::cos(psi + phi));
    case UpsilonPair::re_im: return scale * (std::sin(psi + phi) - std::sin(psi - phi));
  }
  return 0.0;
}

/// The circular constants in their commonly printed form:
/// 2 cos(psi-phi)/(nu+1) and sin(phi-psi)/(2(nu+1)). Kept for reporting the
/// ratio against the integrated values; not used in any computation.
inline double upsilon_moment_printed_circular(double nu, double psi, double phi,
                                              UpsilonPair pair) {
  return pair == UpsilonPair::re_im ? std::sin(phi - psi) / (2.0 * (nu + 1.0))
                                    : 2.0 * std::cos(psi - phi) / (nu + 1.0);
}

/// Monte Carlo counterpart of upsilon_moment_oracle from the exact samplers.
template <class URBG>
MomentEstimate upsilon_moment_mc(const CoefficientLaw& law, double psi, double phi,
                                 UpsilonPair pair, std::size_t samples, URBG& rng) {
  if (samples < 2) throw ParameterDomainError("upsilon_moment_mc needs at least 2 samples");
  const cplx rot_psi = std::polar(1.0, psi);
  const cplx rot_phi = std::polar(1.0, phi);
  CompensatedSum sum;
  CompensatedSum sum_sq;
  for (std::size_t i = 0; i < samples; ++i) {
    cplx centred;
    if (const auto* theta = std::get_if<ThetaParams>(&law)) {
      centred = sample_theta(*theta, rng);
    } else {
      const auto& sym = std::get<BetaSymParams>(law);
      centred = sample_beta_sym(sym, rng) - beta_sym_mean(sym);
    }
    const double v = detail::upsilon_pair_product(-centred * rot_psi, -centred * rot_phi, pair);
    sum.add(v);
    sum_sq.add(v * v);
  }
  const double n = static_cast<double>(samples);
  const double mean = sum.value() / n;
  const double var = std::max(0.0, (sum_sq.value() - n * mean * mean) / (n - 1.0));
  return {mean, std::sqrt(var / n)};
}

struct McEstimate {
  double estimate = 0.0;
  double standard_error = 0.0;
  std::size_t trials = 0;
  std::size_t non_finite = 0;
};

/// Mean and standard error of f over independent matrix-model draws.
/// Non-finite values of f are counted and excluded.
template <class F, class URBG>
McEstimate mc_expectation(F&& f, const EnsembleSpec& spec, std::size_t trials, URBG& rng) {
  if (trials < 2) throw ParameterDomainError("mc_expectation needs at least 2 trials");
  CompensatedSum sum;
  CompensatedSum sum_sq;
  McEstimate out;
  out.trials = trials;
  for (std::size_t t = 0; t < trials; ++t) {
    const PointSample sample =
        spec.kind == EnsembleKind::circular ? cbe_points(spec, rng) : jbe_points(spec, rng);
    const double value = f(sample);
    if (!std::isfinite(value)) {
      ++out.non_finite;
      continue;
    }
    sum.add(value);
    sum_sq.add(value * value);
  }
  const double used = static_cast<double>(trials - out.non_finite);
  if (used < 2.0) return out;
  out.estimate = sum.value() / used;
  const double var = std::max(0.0, (sum_sq.value() - used * out.estimate * out.estimate) / (used - 1.0));
  out.standard_error = std::sqrt(var / used);
  return out;
}

}  // namespace betaop
