#pragma once

#include <stdexcept>
#include <string>

namespace ecfb {

/// Argument outside the documented domain of an operation.
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

/// An iterative scheme (continued fraction, series, search) exhausted its
/// iteration budget before reaching tolerance.
struct ConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Adaptive quadrature could not attain the requested tolerance.
struct QuadratureError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// An exponent left the representable double range.
struct OverflowError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Catastrophic cancellation detected between the two closed-form terms.
struct NumericalInstability : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Requested effective capacity lies at or above the finite-blocklength bound.
struct InfeasibleEc : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// The asymptotic constraint coefficient is non-positive; the high-SNR
/// inversion has no real solution.
struct InfeasibleConstraint : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// alpha within 1e-9 of +/-1, where the asymptotic coefficient degenerates.
struct DegenerateAlpha : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Endpoint sampling found no interior minimum even on the widened bracket.
struct NotUnimodal : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace ecfb
