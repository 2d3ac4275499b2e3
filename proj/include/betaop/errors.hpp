#pragma once

#include <stdexcept>
#include <string>

namespace betaop {

/// A parameter lies outside the domain an operation is defined on
/// (non-positive Beta shapes, |alpha| > 1, nu < 1, ...).
class ParameterDomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A statistic or phase was evaluated exactly at a zero of one of its
/// factors, e.g. theta coincides with an eigenvalue.
class SingularError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Iterative numerics did not converge or violated a residual contract.
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Density is infinite at the requested point (Jacobi edge with a or b < 0).
class InfiniteDensity : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Invalid experiment configuration or unusable output destination.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace betaop
