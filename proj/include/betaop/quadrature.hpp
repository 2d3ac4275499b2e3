#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace betaop {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Legendre rule on [-1, 1] by Newton iteration on P_n.
inline QuadratureRule gauss_legendre(std::size_t order) {
  if (order == 0) throw std::invalid_argument("Gauss-Legendre order must be positive");
  QuadratureRule rule{std::vector<double>(order), std::vector<double>(order)};
  const double n = static_cast<double>(order);
  for (std::size_t i = 0; i < (order + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (n + 0.5));
    double derivative = 1.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (std::size_t k = 2; k <= order; ++k) {
        const double kk = static_cast<double>(k);
        const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
        p0 = p1;
        p1 = p2;
      }
      derivative = n * (x * p1 - p0) / (x * x - 1.0);
      const double step = p1 / derivative;
      x -= step;
      if (std::abs(step) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * derivative * derivative);
    rule.nodes[i] = -x;
    rule.nodes[order - 1 - i] = x;
    rule.weights[i] = rule.weights[order - 1 - i] = w;
  }
  return rule;
}

/// Integral of f over [lo, hi] with a fixed rule.
template <class F>
double integrate(F&& f, double lo, double hi, const QuadratureRule& rule) {
  const double half = 0.5 * (hi - lo);
  const double mid = 0.5 * (hi + lo);
  double acc = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    acc += rule.weights[i] * f(mid + half * rule.nodes[i]);
  }
  return half * acc;
}

/// Composite rule on [0, hi] with panels graded geometrically toward 0;
/// resolves integrable endpoint behaviour such as u^{1/p}.
template <class F>
double integrate_graded(F&& f, double hi, const QuadratureRule& rule, int levels = 48) {
  double acc = 0.0;
  double upper = hi;
  for (int level = 0; level < levels; ++level) {
    const double lower = 0.5 * upper;
    acc += integrate(f, lower, upper, rule);
    upper = lower;
  }
  return acc + integrate(f, 0.0, upper, rule);
}

/// E g(Y) for Y ~ B_[0,1](p, q). Each half of [0, 1] is mapped so the
/// endpoint weight becomes constant: y = u^{1/p} near 0, 1 - y = v^{1/q}
/// near 1. The normalisation is integrated by the same rule.
template <class G>
double beta_expectation(double p, double q, G&& g, const QuadratureRule& rule) {
  const auto lower_half = [&](auto&& h) {
    return integrate_graded(
        [&](double u) {
          const double y = std::pow(u, 1.0 / p);
          return h(y) * std::pow(1.0 - y, q - 1.0) / p;
        },
        std::pow(0.5, p), rule);
  };
  const auto upper_half = [&](auto&& h) {
    return integrate_graded(
        [&](double v) {
          const double one_minus = std::pow(v, 1.0 / q);
          return h(1.0 - one_minus) * std::pow(1.0 - one_minus, p - 1.0) / q;
        },
        std::pow(0.5, q), rule);
  };
  const auto one = [](double) { return 1.0; };
  const double norm = lower_half(one) + upper_half(one);
  return (lower_half(g) + upper_half(g)) / norm;
}

}  // namespace betaop
