#pragma once

// CMV and Jacobi matrix models built from Verblunsky coefficients, their
// spectra, and the determinant / orthogonal-polynomial identities
//   det(z - C_n) = Phi_n(z),   det(x - J_n) = P_n(x).

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "betaop/errors.hpp"
#include "betaop/opuc.hpp"

namespace betaop {

struct CmvMatrix {
  std::size_t n = 0;
  Eigen::MatrixXcd L;  // diag(Xi_0, Xi_2, ...)
  Eigen::MatrixXcd M;  // diag(Xi_{-1}, Xi_1, Xi_3, ...)
  Eigen::MatrixXcd dense;
};

struct JacobiTridiagonal {
  std::vector<double> diag;     // b_1..b_n
  std::vector<double> offdiag;  // a_1..a_{n-1}, all > 0

  [[nodiscard]] std::size_t n() const { return diag.size(); }

  [[nodiscard]] Eigen::MatrixXd dense() const {
    const auto size = static_cast<Eigen::Index>(n());
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(size, size);
    for (Eigen::Index i = 0; i < size; ++i) out(i, i) = diag[static_cast<std::size_t>(i)];
    for (Eigen::Index i = 0; i + 1 < size; ++i) {
      out(i, i + 1) = out(i + 1, i) = offdiag[static_cast<std::size_t>(i)];
    }
    return out;
  }
};

/// C_n = L_n M_n. The last block Xi_{n-1} = [conj(alpha_{n-1})] is 1x1; a
/// unimodular final coefficient makes C_n unitary.
inline CmvMatrix build_cmv(const VerblunskySequence& alphas) {
  if (alphas.kind() != CoefficientKind::circular) {
    throw ParameterDomainError("build_cmv needs a circular coefficient sequence");
  }
  const std::size_t n = alphas.size();
  if (n == 0) throw ParameterDomainError("build_cmv needs at least one coefficient");
  const auto size = static_cast<Eigen::Index>(n);
  CmvMatrix out{n, Eigen::MatrixXcd::Zero(size, size), Eigen::MatrixXcd::Zero(size, size), {}};
  out.M(0, 0) = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    const cplx alpha = alphas.values()[k];
    Eigen::MatrixXcd& target = (k % 2 == 0) ? out.L : out.M;
    const auto row = static_cast<Eigen::Index>(k);
    if (k + 1 == n) {
      target(row, row) = std::conj(alpha);
      continue;
    }
    const double rho = std::sqrt(std::max(0.0, 1.0 - std::norm(alpha)));
    target(row, row) = std::conj(alpha);
    target(row, row + 1) = rho;
    target(row + 1, row) = rho;
    target(row + 1, row + 1) = -alpha;
  }
  out.dense = out.L * out.M;
  return out;
}

/// Geronimus relations, k = 0..n-1:
///   a_{k+1}^2 = (1 - alpha_{2k-1})(1 - alpha_{2k}^2)(1 + alpha_{2k+1})
///   b_{k+1}   = (1 - alpha_{2k-1}) alpha_{2k} - (1 + alpha_{2k-1}) alpha_{2k-2}
/// The formal a_n carries the factor 1 + alpha_{2n-1} = 0 and is dropped.
inline JacobiTridiagonal build_jacobi(const VerblunskySequence& alphas) {
  if (alphas.kind() != CoefficientKind::jacobi) {
    throw ParameterDomainError("build_jacobi needs a real Jacobi coefficient sequence");
  }
  const std::size_t n = alphas.jacobi_points();
  const auto a = [&](long k) { return alphas.at(k).real(); };
  JacobiTridiagonal out;
  out.diag.resize(n);
  out.offdiag.resize(n - 1);
  for (std::size_t idx = 0; idx < n; ++idx) {
    const long k = static_cast<long>(idx);
    out.diag[idx] = (1.0 - a(2 * k - 1)) * a(2 * k) - (1.0 + a(2 * k - 1)) * a(2 * k - 2);
    if (idx + 1 < n) {
      const double sq = (1.0 - a(2 * k - 1)) * (1.0 - a(2 * k) * a(2 * k)) * (1.0 + a(2 * k + 1));
      out.offdiag[idx] = std::sqrt(sq);
    }
  }
  return out;
}

/// Eigenvalues of a symmetric tridiagonal matrix, ascending.
///
/// Implicit QL with Wilkinson shifts on a working copy; no eigenvectors.
inline std::vector<double> eig_tridiag(const JacobiTridiagonal& J, int max_sweeps = 60) {
  const std::size_t n = J.n();
  std::vector<double> d(J.diag);
  std::vector<double> e(n, 0.0);
  std::copy(J.offdiag.begin(), J.offdiag.end(), e.begin());

  for (std::size_t l = 0; l < n; ++l) {
    int iterations = 0;
    for (;;) {
      std::size_t m = l;
      for (; m + 1 < n; ++m) {
        const double scale = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= std::numeric_limits<double>::epsilon() * scale) break;
      }
      if (m == l) break;
      if (++iterations > max_sweeps) {
        throw NumericalFailure("tridiagonal QL did not converge for eigenvalue " +
                               std::to_string(l) + " of a " + std::to_string(n) + "x" +
                               std::to_string(n) + " matrix");
      }
      double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
      double r = std::hypot(g, 1.0);
      g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
      double s = 1.0;
      double c = 1.0;
      double p = 0.0;
      bool deflated = false;
      for (std::size_t i = m; i-- > l;) {
        double f = s * e[i];
        const double b = c * e[i];
        r = std::hypot(f, g);
        e[i + 1] = r;
        if (r == 0.0) {
          d[i + 1] -= p;
          e[m] = 0.0;
          deflated = true;
          break;
        }
        s = f / r;
        c = g / r;
        g = d[i + 1] - p;
        r = (d[i] - g) * s + 2.0 * c * b;
        p = s * r;
        d[i + 1] = g + p;
        g = c * r - b;
      }
      if (deflated) continue;
      d[l] -= p;
      e[l] = g;
      e[m] = 0.0;
    }
  }
  std::sort(d.begin(), d.end());
  return d;
}

/// Largest entry of |C^* C - I|.
inline double unitarity_defect(const Eigen::MatrixXcd& C) {
  const auto n = C.rows();
  return (C.adjoint() * C - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff();
}

/// Eigenangles of a unitary CMV matrix, ascending in [0, 2 pi).
inline std::vector<double> eig_unitary_cmv(const CmvMatrix& C, double unitarity_tolerance = 1e-10) {
  const double defect = unitarity_defect(C.dense);
  if (!(defect < unitarity_tolerance)) {
    throw ParameterDomainError("CMV matrix is not unitary (defect " + std::to_string(defect) + ")");
  }
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(C.dense, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw NumericalFailure("complex eigensolver failed on a " + std::to_string(C.n) + "x" +
                           std::to_string(C.n) + " CMV matrix");
  }
  std::vector<double> angles;
  angles.reserve(C.n);
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
    const cplx lambda = solver.eigenvalues()(i);
    if (!(std::abs(std::abs(lambda) - 1.0) < 1e-8)) {
      throw NumericalFailure("CMV eigenvalue off the unit circle by " +
                             std::to_string(std::abs(std::abs(lambda) - 1.0)));
    }
    double angle = std::arg(lambda);
    if (angle < 0.0) angle += 2.0 * std::numbers::pi;
    if (angle >= 2.0 * std::numbers::pi) angle -= 2.0 * std::numbers::pi;
    angles.push_back(angle);
  }
  std::sort(angles.begin(), angles.end());
  return angles;
}

/// det(z I - A) by partial-pivot LU.
inline cplx det_shifted(const Eigen::MatrixXcd& A, cplx z) {
  const auto n = A.rows();
  const Eigen::MatrixXcd shifted = z * Eigen::MatrixXcd::Identity(n, n) - A;
  return shifted.partialPivLu().determinant();
}

inline cplx det_shifted(const JacobiTridiagonal& J, cplx x) {
  return det_shifted(Eigen::MatrixXcd(J.dense().cast<cplx>()), x);
}

/// P_n(x) from Phi_2n through x = z + 1/z:
///   P_n(z + 1/z) = (z^{-n} Phi_2n(z) + z^n Phi_2n(1/z)) / (1 - alpha_{2n-1}).
inline cplx line_circle_polynomial(const VerblunskySequence& alphas, cplx x) {
  if (alphas.kind() != CoefficientKind::jacobi) {
    throw ParameterDomainError("line_circle_polynomial needs a Jacobi coefficient sequence");
  }
  const auto coeffs = alphas.recursion_coefficients();
  const double n = static_cast<double>(alphas.jacobi_points());
  cplx z = 0.5 * (x + std::sqrt(x * x - 4.0));
  if (std::abs(z) < 1.0) z = 1.0 / z;  // either root works; keep |z| >= 1
  const cplx forward = szego_evaluate(coeffs, z).phi;
  const cplx backward = szego_evaluate(coeffs, 1.0 / z).phi;
  const double boundary = 1.0 - alphas.at(static_cast<long>(alphas.size())).real();
  return (std::pow(z, -n) * forward + std::pow(z, n) * backward) / boundary;
}

/// Max over the grid of |det - polynomial| / (1 + |polynomial|).
///
/// Circular: det(z - C_n) against Phi_n(z) from the Szego recursion.
/// Jacobi: det(x - J_n) against P_n(x) from the line-circle map.
inline double verify_charpoly(const VerblunskySequence& alphas, std::span<const cplx> grid) {
  double worst = 0.0;
  if (alphas.kind() == CoefficientKind::circular) {
    const CmvMatrix C = build_cmv(alphas);
    for (const cplx& z : grid) {
      const cplx poly = szego_evaluate(alphas, z).phi;
      worst = std::max(worst, std::abs(det_shifted(C.dense, z) - poly) / (1.0 + std::abs(poly)));
    }
  } else {
    const JacobiTridiagonal J = build_jacobi(alphas);
    const Eigen::MatrixXcd dense = J.dense().cast<cplx>();
    for (const cplx& x : grid) {
      const cplx poly = line_circle_polynomial(alphas, x);
      worst = std::max(worst, std::abs(det_shifted(dense, x) - poly) / (1.0 + std::abs(poly)));
    }
  }
  return worst;
}

/// Residual of det(+-2 - J_n) = (+-1)^n (2 / (1 - alpha_{2n-1})) Phi_2n(+-1).
inline double verify_edge_determinants(const VerblunskySequence& alphas) {
  const JacobiTridiagonal J = build_jacobi(alphas);
  const Eigen::MatrixXcd dense = J.dense().cast<cplx>();
  const auto coeffs = alphas.recursion_coefficients();
  const double prefactor = 2.0 / (1.0 - coeffs.back().real());
  const double parity = (alphas.jacobi_points() % 2 == 0) ? 1.0 : -1.0;
  double worst = 0.0;
  for (const double edge : {2.0, -2.0}) {
    const double sign = edge > 0 ? 1.0 : parity;
    const cplx poly = sign * prefactor * szego_evaluate(coeffs, cplx(edge / 2.0, 0.0)).phi;
    const cplx det = det_shifted(dense, cplx(edge, 0.0));
    worst = std::max(worst, std::abs(det - poly) / (1.0 + std::abs(poly)));
  }
  return worst;
}

}  // namespace betaop
