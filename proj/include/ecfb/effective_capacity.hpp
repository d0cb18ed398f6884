#pragma once

// Effective capacity of a finite-blocklength link over quasi-static Rayleigh
// fading. Two backends for the service-process expectation psi:
//   - an adaptive-quadrature oracle integrating the exact kernel, and
//   - the closed form in incomplete-gamma functions.
// Plus the finite-blocklength upper bounds, the delay-outage map, and the
// optimal-error-probability search.

#include "ecfb/rate_kernel.hpp"

namespace ecfb {

enum class EcMethod { ClosedForm, QuadratureOracle };

struct EcResult {
  double ec = 0.0;       // bits per channel use
  EcMethod method = EcMethod::ClosedForm;
  double psi = 1.0;      // the expectation behind ec = -ln(psi)/(n theta)
  double diagnostic = 0.0;  // quadrature error estimate, or the closed
                            // form's term-cancellation ratio
  bool floored_at_eps = false;  // psi fell below eps (numerical error) and
                                // was clamped to the bound
};

/// psi = E_Z[eps + (1-eps) e^(-n theta r)] by adaptive Gauss-Kronrod
/// quadrature against the unit-mean exponential gain density, relative
/// tolerance 1e-10. The integral is truncated where the remaining tail is
/// below 1e-16 of the result; the kernel is checked to have decayed below 1
/// before truncating. `err_estimate` (optional) receives the quadrature
/// error estimate.
double psi_oracle(const SystemParams& p, double* err_estimate = nullptr);

/// Closed-form psi = eps + (1-eps) J with
///   J = e^(1/rho) rho^alpha [ (kappa+1) Gamma(alpha+1, 1/rho)
///                             - (kappa - beta/2)/rho^2 Gamma(alpha-1, 1/rho) ].
/// Negative orders are routed through E_nu, which cancels the rho^alpha
/// factor analytically, so nothing under- or overflows at large rho |alpha|.
/// `cancellation` (optional) receives |T1-T2| / (|T1|+|T2|).
/// Throws NumericalInstability if the two terms cancel past 1e-6.
double psi_closed_form(const SystemParams& p, double* cancellation = nullptr);

/// ec = -ln(psi)/(n theta) with the selected backend. psi below eps (possible
/// only through rounding) is floored at eps and flagged.
EcResult effective_capacity(const SystemParams& p, EcMethod method);

/// High-SNR EC bound C_eb = -ln(eps)/(n theta).
double ec_upper_bound(int n, double theta, double eps,
                      bool allow_small_n = false);

/// Delay-exponent bound theta_b = -ln(eps)/(n ce) for a buffer holding a
/// fixed EC.
double theta_upper_bound(int n, double ce, double eps);

/// Delay-outage probability e^(-theta ce d_max).
double delay_outage_prob(double theta, double ce, double d_max);

/// EC of the infinite-blocklength Shannon model (zero error, r = C(rho z)):
/// the classical unbounded reference curve.
double ec_shannon_infinite(int n, double theta, double rho,
                           bool allow_small_n = false);

struct EpsilonOptResult {
  double eps_star = 0.0;
  double ec_max = 0.0;
  int iterations = 0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
};

/// Error probability maximizing EC at fixed (n, theta, rho): golden-section
/// minimization of psi(eps) in log-eps over [1e-12, 0.5], widened to
/// [1e-12, 1 - 1e-9] if psi is still decreasing at 0.5. Terminates when the
/// bracket width falls below 1e-3 relative.
/// Throws ConvergenceError past 200 iterations, NotUnimodal if no interior
/// minimum exists even on the widened bracket.
EpsilonOptResult optimal_epsilon(int n, double theta, double rho,
                                 EcMethod backend);

}  // namespace ecfb
