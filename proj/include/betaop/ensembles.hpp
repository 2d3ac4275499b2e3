#pragma once

// Circular and Jacobi beta ensembles through their Verblunsky-coefficient
// matrix models, the characteristic-polynomial linear statistics, their
// centering, and the independent-product laws those statistics follow.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include "betaop/distributions.hpp"
#include "betaop/errors.hpp"
#include "betaop/matrix_models.hpp"
#include "betaop/opuc.hpp"

namespace betaop {

enum class EnsembleKind { circular, jacobi };

inline const char* to_string(EnsembleKind kind) {
  return kind == EnsembleKind::circular ? "circular" : "jacobi";
}

struct EnsembleSpec {
  EnsembleKind kind = EnsembleKind::circular;
  std::size_t n = 1;
  double beta = 2.0;
  double a = 0.0;  // Jacobi only
  double b = 0.0;  // Jacobi only

  static EnsembleSpec circular(std::size_t n, double beta) {
    EnsembleSpec spec{EnsembleKind::circular, n, beta, 0.0, 0.0};
    spec.validate();
    return spec;
  }

  static EnsembleSpec jacobi(std::size_t n, double beta, double a, double b) {
    EnsembleSpec spec{EnsembleKind::jacobi, n, beta, a, b};
    spec.validate();
    return spec;
  }

  void validate() const {
    if (n < 1) throw ParameterDomainError("ensemble size n must be >= 1");
    if (!(beta > 0.0)) throw ParameterDomainError("beta must be > 0");
    if (kind == EnsembleKind::jacobi && (!(a > -1.0) || !(b > -1.0))) {
      throw ParameterDomainError("Jacobi ensemble requires a, b > -1");
    }
  }
};

/// Angles in [0, 2 pi) for circular ensembles, points in [-2, 2] for Jacobi;
/// ascending in both cases.
struct PointSample {
  EnsembleSpec spec;
  std::vector<double> points;
};

enum class Route { eigenvalue, recursion };

inline const char* to_string(Route route) {
  return route == Route::eigenvalue ? "eigenvalue" : "recursion";
}

struct LinearStatisticResult {
  double theta = 0.0;
  std::size_t n = 0;
  cplx raw;
  cplx centered;
  Route route = Route::recursion;
};

/// Law of alpha_k in the Jacobi model:
///   k even: B_[-1,1](k beta/4 + a + 1, k beta/4 + b + 1)
///   k odd:  B_[-1,1]((k-1) beta/4 + a + b + 2, (k+1) beta/4)
inline BetaSymParams jacobi_coefficient_law(std::size_t k, double beta, double a, double b) {
  const double kk = static_cast<double>(k);
  if (k % 2 == 0) return {kk * beta / 4.0 + a + 1.0, kk * beta / 4.0 + b + 1.0};
  return {(kk - 1.0) * beta / 4.0 + a + b + 2.0, (kk + 1.0) * beta / 4.0};
}

/// alpha_k ~ Theta_{beta k + 1}, k = 0..n-1; alpha_0 is uniform on the circle.
template <class URBG>
VerblunskySequence sample_cbe_alphas(std::size_t n, double beta, URBG& rng) {
  EnsembleSpec::circular(n, beta);
  std::vector<cplx> values(n);
  for (std::size_t k = 0; k < n; ++k) {
    values[k] = sample_theta(beta * static_cast<double>(k) + 1.0, rng);
  }
  return VerblunskySequence::circular(std::move(values));
}

template <class URBG>
VerblunskySequence sample_jbe_alphas(std::size_t n, double beta, double a, double b, URBG& rng) {
  EnsembleSpec::jacobi(n, beta, a, b);
  std::vector<double> values(2 * n - 1);
  for (std::size_t k = 0; k < values.size(); ++k) {
    values[k] = sample_beta_sym(jacobi_coefficient_law(k, beta, a, b), rng);
  }
  return VerblunskySequence::jacobi(values);
}

/// Coefficient order used to build C_n: the sampled sequence reversed, so
/// the unimodular alpha_0 ~ Theta_1 becomes the terminal coefficient.
inline VerblunskySequence cmv_order(const VerblunskySequence& alphas) {
  std::vector<cplx> reversed(alphas.values().rbegin(), alphas.values().rend());
  return VerblunskySequence::circular(std::move(reversed));
}

inline PointSample cbe_points_from_alphas(const EnsembleSpec& spec,
                                          const VerblunskySequence& alphas) {
  return {spec, eig_unitary_cmv(build_cmv(cmv_order(alphas)))};
}

inline PointSample jbe_points_from_alphas(const EnsembleSpec& spec,
                                          const VerblunskySequence& alphas) {
  return {spec, eig_tridiag(build_jacobi(alphas))};
}

template <class URBG>
PointSample cbe_points(const EnsembleSpec& spec, URBG& rng) {
  if (spec.kind != EnsembleKind::circular) {
    throw ParameterDomainError("cbe_points needs a circular ensemble spec");
  }
  return cbe_points_from_alphas(spec, sample_cbe_alphas(spec.n, spec.beta, rng));
}

template <class URBG>
PointSample jbe_points(const EnsembleSpec& spec, URBG& rng) {
  if (spec.kind != EnsembleKind::jacobi) {
    throw ParameterDomainError("jbe_points needs a Jacobi ensemble spec");
  }
  return jbe_points_from_alphas(spec, sample_jbe_alphas(spec.n, spec.beta, spec.a, spec.b, rng));
}

namespace detail {

inline bool same_angle(double theta, double target) {
  return std::abs(std::remainder(theta - target, 2.0 * std::numbers::pi)) < 1e-12;
}

}  // namespace detail

/// E_n(theta) = (C_0 delta_0(theta) + C_pi delta_pi(theta)) log n - i n theta,
/// C_0 = (2a+1)/beta - 1/2, C_pi = (2b+1)/beta - 1/2.
inline cplx centering_term(double theta, std::size_t n, const EnsembleSpec& spec) {
  if (spec.kind != EnsembleKind::jacobi) {
    throw ParameterDomainError("centering_term applies to the Jacobi ensemble");
  }
  const double log_n = std::log(static_cast<double>(n));
  double edge = 0.0;
  if (detail::same_angle(theta, 0.0)) edge = (2.0 * spec.a + 1.0) / spec.beta - 0.5;
  if (detail::same_angle(theta, std::numbers::pi)) edge = (2.0 * spec.b + 1.0) / spec.beta - 0.5;
  return {edge * log_n, -static_cast<double>(n) * theta};
}

/// Z_n(theta) = sum_k log(1 - e^{-i(theta - eta_k)}) over the eigenangles.
inline LinearStatisticResult linear_statistic_circular(const PointSample& sample, double theta) {
  CompensatedComplexSum sum;
  for (const double eta : sample.points) {
    const cplx factor = 1.0 - std::polar(1.0, eta - theta);
    if (factor == cplx(0.0, 0.0)) {
      throw SingularError("theta coincides with an eigenangle");
    }
    sum.add(std::log(factor));
  }
  const cplx z = sum.value();
  return {theta, sample.points.size(), z, z, Route::eigenvalue};
}

/// Recursion route: Z_n(theta) = conj(log Phi_n^*(e^{i theta})) = T - iS
/// over the sequence as given. Pass cmv_order(alphas) to compare per draw
/// with the eigenvalue route of cbe_points_from_alphas.
inline LinearStatisticResult linear_statistic_circular(const VerblunskySequence& alphas,
                                                       double theta) {
  if (alphas.kind() != CoefficientKind::circular) {
    throw ParameterDomainError("linear_statistic_circular needs circular coefficients");
  }
  const cplx z = std::conj(log_char_product(alphas, theta));
  return {theta, alphas.size(), z, z, Route::recursion};
}

/// Recursion route: Z_n(2 cos theta) = -i n theta + sum_{k=0}^{2n-1}
/// log(1 - alpha_k e^{i psi_k(theta)}), boundary term alpha_{2n-1} = -1
/// included; centered = raw - E_n(theta).
inline LinearStatisticResult linear_statistic_jacobi(const VerblunskySequence& alphas,
                                                     double theta, const EnsembleSpec& spec) {
  if (alphas.kind() != CoefficientKind::jacobi) {
    throw ParameterDomainError("linear_statistic_jacobi needs Jacobi coefficients");
  }
  const std::size_t n = alphas.jacobi_points();
  const cplx raw =
      log_char_product(alphas, theta) - cplx(0.0, static_cast<double>(n) * theta);
  return {theta, n, raw, raw - centering_term(theta, n, spec), Route::recursion};
}

/// Eigenvalue route: sum_k log(E - x_k) at E = 2 cos theta, where a negative
/// factor contributes log|E - x_k| - i pi (E reached from the lower half
/// plane, i.e. z = e^{i theta} from inside the disk).
inline LinearStatisticResult linear_statistic_jacobi(const PointSample& sample, double theta) {
  const double energy = 2.0 * std::cos(theta);
  CompensatedComplexSum sum;
  for (const double x : sample.points) {
    const double gap = energy - x;
    if (gap == 0.0) throw SingularError("2 cos theta coincides with an eigenvalue");
    sum.add({std::log(std::abs(gap)), gap < 0.0 ? -std::numbers::pi : 0.0});
  }
  const std::size_t n = sample.points.size();
  const cplx raw = sum.value();
  return {theta, n, raw, raw - centering_term(theta, n, sample.spec), Route::eigenvalue};
}

/// One draw of prod_{k=1}^n (1 + e^{i theta_k} sqrt(X_{k-1})),
/// X_j ~ B_[0,1](1, j beta / 2), X_0 = 1.
template <class URBG>
cplx theorem1_rhs_circular(std::size_t n, double beta, URBG& rng) {
  EnsembleSpec::circular(n, beta);
  cplx product{1.0, 0.0};
  for (std::size_t j = 0; j < n; ++j) {
    const double phase = 2.0 * std::numbers::pi * uniform_closed_open(rng);
    const double x = sample_beta01(1.0, static_cast<double>(j) * beta / 2.0, rng);
    product *= 1.0 + std::polar(std::sqrt(x), phase);
  }
  return product;
}

/// One draw of 2 prod_{k=0}^{2n-2} (1 - sign^{k+1} X_k), X_k with the Jacobi
/// coefficient laws.
template <class URBG>
double theorem1_rhs_jacobi(std::size_t n, double beta, double a, double b, int sign, URBG& rng) {
  EnsembleSpec::jacobi(n, beta, a, b);
  if (sign != 1 && sign != -1) throw ParameterDomainError("sign must be +1 or -1");
  double product = 2.0;
  for (std::size_t k = 0; k + 1 < 2 * n; ++k) {
    const double x = sample_beta_sym(jacobi_coefficient_law(k, beta, a, b), rng);
    const double power = (sign == 1 || k % 2 == 1) ? 1.0 : -1.0;
    product *= 1.0 - power * x;
  }
  return product;
}

}  // namespace betaop
