#pragma once

// Orthogonal polynomials on the unit circle driven by Verblunsky coefficients:
// the Szego recursion, the Prufer phases psi_k(theta) with
// e^{i psi_k} = z Phi_k(z) / Phi_k^*(z), and the product form
//   Phi_m^*(e^{i theta}) = prod_k (1 - alpha_k e^{i psi_k(theta)}).

#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "betaop/errors.hpp"
#include "betaop/summation.hpp"

namespace betaop {

using cplx = std::complex<double>;

enum class CoefficientKind { circular, jacobi };

/// Ordered Verblunsky coefficients alpha_0..alpha_{m-1}.
///
/// Circular sequences hold complex values with |alpha_k| <= 1.
/// Jacobi sequences hold the 2n-1 real interior values alpha_0..alpha_{2n-2},
/// each in (-1, 1); the boundary alpha_{-1} = alpha_{2n-1} = -1 is implicit.
class VerblunskySequence {
 public:
  static constexpr double kUnitTolerance = 1e-12;

  static VerblunskySequence circular(std::vector<cplx> values) {
    for (std::size_t k = 0; k < values.size(); ++k) {
      if (!(std::abs(values[k]) <= 1.0 + kUnitTolerance)) {
        throw ParameterDomainError("Verblunsky coefficient " + std::to_string(k) +
                                   " lies outside the closed unit disk");
      }
    }
    return VerblunskySequence(CoefficientKind::circular, std::move(values));
  }

  static VerblunskySequence jacobi(std::span<const double> interior) {
    if (interior.size() % 2 != 1) {
      throw ParameterDomainError("Jacobi sequences need an odd number (2n-1) of interior values");
    }
    std::vector<cplx> values;
    values.reserve(interior.size());
    for (std::size_t k = 0; k < interior.size(); ++k) {
      if (!(std::abs(interior[k]) < 1.0)) {
        throw ParameterDomainError("Jacobi coefficient " + std::to_string(k) +
                                   " must lie strictly inside (-1, 1)");
      }
      values.emplace_back(interior[k], 0.0);
    }
    return VerblunskySequence(CoefficientKind::jacobi, std::move(values));
  }

  [[nodiscard]] CoefficientKind kind() const { return kind_; }
  [[nodiscard]] std::size_t size() const { return values_.size(); }
  [[nodiscard]] std::span<const cplx> values() const { return values_; }

  /// Number of Jacobi points n (stored size is 2n-1).
  [[nodiscard]] std::size_t jacobi_points() const { return (values_.size() + 1) / 2; }

  /// Coefficient with the boundary conventions applied: for Jacobi
  /// sequences alpha_{-1} = alpha_{2n-1} = -1 and anything further out
  /// reads as 0 (it only ever appears multiplied by 1 + alpha_{-1} = 0).
  [[nodiscard]] cplx at(long k) const {
    const long m = static_cast<long>(values_.size());
    if (k >= 0 && k < m) return values_[static_cast<std::size_t>(k)];
    if (kind_ == CoefficientKind::jacobi && (k == -1 || k == m)) return {-1.0, 0.0};
    return {0.0, 0.0};
  }

  /// Coefficients fed to the Szego recursion: the stored values, plus the
  /// terminal alpha_{2n-1} = -1 for Jacobi sequences (yielding Phi_{2n}).
  [[nodiscard]] std::vector<cplx> recursion_coefficients() const {
    std::vector<cplx> out(values_);
    if (kind_ == CoefficientKind::jacobi) out.emplace_back(-1.0, 0.0);
    return out;
  }

 private:
  VerblunskySequence(CoefficientKind kind, std::vector<cplx> values)
      : kind_(kind), values_(std::move(values)) {}

  CoefficientKind kind_;
  std::vector<cplx> values_;
};

struct SzegoValues {
  cplx phi;
  cplx phi_star;
};

inline SzegoValues szego_evaluate(std::span<const cplx> alphas, cplx z) {
  cplx phi{1.0, 0.0};
  cplx phi_star{1.0, 0.0};
  for (const cplx& alpha : alphas) {
    const cplx next = z * phi - std::conj(alpha) * phi_star;
    phi_star = phi_star - z * alpha * phi;
    phi = next;
  }
  return {phi, phi_star};
}

/// (Phi_m(z), Phi_m^*(z)); for Jacobi sequences m = 2n including the boundary.
inline SzegoValues szego_evaluate(const VerblunskySequence& alphas, cplx z) {
  return szego_evaluate(alphas.recursion_coefficients(), z);
}

struct PruferTrajectory {
  double theta = 0.0;
  /// psi_0..psi_m, continuous (never reduced mod 2 pi); psi_0 = theta.
  std::vector<double> psis;
};

/// Streams coefficients through the phase recursion
///   psi_{k+1} = psi_k + theta - 2 Im log(1 - alpha_k e^{i psi_k}),
/// accumulating sum_k log(1 - alpha_k e^{i psi_k}) with compensated sums.
/// The starting phase is psi_0 = theta, the argument of B_0(z) = z.
class PhaseProductAccumulator {
 public:
  explicit PhaseProductAccumulator(double theta) : theta_(theta), psi_(theta) {}

  /// log(1 - alpha e^{i psi}) at the current phase, principal branch.
  [[nodiscard]] cplx term(cplx alpha) const {
    if (!(std::abs(alpha) <= 1.0 + VerblunskySequence::kUnitTolerance)) {
      throw SingularError("phase recursion needs |alpha| <= 1 (coefficient " +
                          std::to_string(count_) + ")");
    }
    const double psi = psi_.value();
    const cplx factor = 1.0 - alpha * cplx(std::cos(psi), std::sin(psi));
    if (std::abs(factor) <= 8.0 * std::numeric_limits<double>::epsilon()) {
      throw SingularError("statistic evaluated at a zero of factor " + std::to_string(count_));
    }
    return std::log(factor);
  }

  void push(cplx alpha) {
    const cplx upsilon = term(alpha);
    sum_.add(upsilon);
    psi_.add(theta_);
    psi_.add(-2.0 * upsilon.imag());
    ++count_;
  }

  [[nodiscard]] cplx value() const { return sum_.value(); }
  [[nodiscard]] double phase() const { return psi_.value(); }
  [[nodiscard]] double theta() const { return theta_; }
  [[nodiscard]] std::size_t count() const { return count_; }

 private:
  double theta_;
  CompensatedSum psi_;
  CompensatedComplexSum sum_;
  std::size_t count_ = 0;
};

inline PruferTrajectory prufer_phases(std::span<const cplx> alphas, double theta) {
  PruferTrajectory out{theta, {}};
  out.psis.reserve(alphas.size() + 1);
  PhaseProductAccumulator acc(theta);
  out.psis.push_back(acc.phase());
  for (const cplx& alpha : alphas) {
    acc.push(alpha);
    out.psis.push_back(acc.phase());
  }
  return out;
}

inline PruferTrajectory prufer_phases(const VerblunskySequence& alphas, double theta) {
  return prufer_phases(alphas.recursion_coefficients(), theta);
}

/// T + iS = sum_k log(1 - alpha_k e^{i psi_k(theta)}); exp of the result is
/// Phi_m^*(e^{i theta}).
inline cplx log_char_product(std::span<const cplx> alphas, double theta) {
  PhaseProductAccumulator acc(theta);
  for (const cplx& alpha : alphas) acc.push(alpha);
  return acc.value();
}

inline cplx log_char_product(const VerblunskySequence& alphas, double theta) {
  return log_char_product(alphas.recursion_coefficients(), theta);
}

}  // namespace betaop
