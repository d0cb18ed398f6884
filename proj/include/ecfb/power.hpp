#pragma once

// High-SNR asymptotics: the power-delay profile (required SNR for a target
// EC), the closed-form optimal power allocation under a minimum-EC-slope
// constraint, and the saved-power accounting.

#include "ecfb/rate_kernel.hpp"

namespace ecfb {

/// Coefficients of the high-SNR expansion J ~ e^(1/rho) F / rho and the
/// target G = (e^(-n theta ce) - eps)/(1 - eps). Feasibility of a requested
/// EC is G > 0; the inversion further needs F > 0.
struct AsymptoticTerms {
  double F = 0.0;
  double G = 0.0;
};

/// F = (kappa - beta/2)/(alpha - 1) - (kappa + 1)/(alpha + 1).
/// Throws DegenerateAlpha if alpha is within 1e-9 of +/-1.
double asymptotic_F(const AuxParams& aux);

AsymptoticTerms make_asymptotic_terms(int n, double theta, double eps,
                                      double ce);

/// High-SNR approximation of the SNR required to sustain EC = ce:
/// rho = 1 / W(G / F). Throws InfeasibleEc when ce is at or above the
/// finite-blocklength bound (G <= 0), InfeasibleConstraint when F <= 0
/// (theta n <= ln 2, outside the expansion's region).
double required_snr(double ce, int n, double theta, double eps);

enum class Binding { DerivativeConstraint, PowerCap };

struct PowerAllocResult {
  double rho_star = 0.0;
  double rho_max = 0.0;
  double eta_db = 0.0;       // saved power, 10 log10(rho_max / rho_star)
  double ec_at_star = 0.0;   // closed-form EC at rho_star
  double ec_at_max = 0.0;    // closed-form EC at rho_max
  Binding binding = Binding::PowerCap;
  bool high_snr_warning = false;  // rho_star below 10 dB, outside the
                                  // approximation's intended region
};

/// Closed-form optimum of the slope-constrained EC maximization:
///   rho* = min{ 2 / (sqrt(1 + 4 sqrt(mu n theta eps / ((1-eps) F))) - 1),
///               rho_max }.
/// mu = 0 leaves the cap binding with zero saving.
PowerAllocResult optimal_power(int n, double theta, double eps, double mu,
                               double rho_max);

/// Saved power in dB; requires 0 < rho_star <= rho_max.
double power_saving_db(double rho_star, double rho_max);

/// Analytic EC slope d(ec)/d(rho) of the closed form at high SNR:
/// ((1-eps)/(n theta psi)) (F / rho^2) (1 + 1/rho)^2 with the exact
/// closed-form psi (the psi -> eps shortcut is confined to optimal_power).
double ec_derivative(const SystemParams& p);

}  // namespace ecfb
