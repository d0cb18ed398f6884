#pragma once

// Scalar special functions backing the closed-form effective-capacity
// expressions: Gaussian Q and its inverse, the upper incomplete gamma at
// real (including large negative) order, the generalized exponential
// integral E_nu, and the principal Lambert-W branch.
//
// All functions are pure and deterministic; no shared state.

namespace ecfb::specfun {

/// Standard normal tail probability Q(x) = 0.5 * erfc(x / sqrt(2)).
/// Strictly decreasing, Q(0) = 0.5. Throws DomainError for non-finite x.
double gaussian_q(double x);

/// Inverse of gaussian_q on (0, 1). Rational initial guess (Acklam) refined
/// by Newton steps on Q itself; round-trips through gaussian_q to ~1e-12
/// relative. Throws DomainError unless 0 < eps < 1.
double gaussian_q_inv(double eps);

/// Upper incomplete gamma Gamma(a, x) = int_x^inf t^(a-1) e^(-t) dt for
/// real a and x > 0. Orders a <= 0 are routed through the generalized
/// exponential integral, Gamma(a, x) = x^a * E_{1-a}(x); positive orders use
/// the regularized series / continued-fraction split at x = a + 1.
double upper_inc_gamma(double a, double x);

/// Generalized exponential integral E_nu(x) = int_1^inf e^(-x t) t^(-nu) dt
/// for nu >= 1, x > 0. Modified-Lentz continued fraction where it converges
/// (x > 1, or any x once nu is large); power series otherwise.
/// Throws ConvergenceError if the continued fraction exhausts its budget.
double gen_exp_integral(double nu, double x);

/// Principal branch W0 of the Lambert-W function, W(x) e^W(x) = x, W >= -1.
/// Branch-appropriate initial guess plus Halley iteration; the round-trip
/// residual is within ~1e-12 relative. Throws DomainError for x < -1/e.
double lambert_w0(double x);

}  // namespace ecfb::specfun
