#include "ecfb/power.hpp"

#include <cmath>

#include "ecfb/effective_capacity.hpp"
#include "ecfb/errors.hpp"
#include "ecfb/specfun.hpp"

namespace ecfb {

double asymptotic_F(const AuxParams& aux) {
  if (std::fabs(aux.alpha + 1.0) < 1e-9 || std::fabs(aux.alpha - 1.0) < 1e-9) {
    throw DegenerateAlpha("asymptotic_F: alpha within 1e-9 of +/-1");
  }
  return (aux.kappa - 0.5 * aux.beta) / (aux.alpha - 1.0) -
         (aux.kappa + 1.0) / (aux.alpha + 1.0);
}

AsymptoticTerms make_asymptotic_terms(int n, double theta, double eps,
                                      double ce) {
  AsymptoticTerms t;
  t.F = asymptotic_F(make_aux(n, theta, eps));
  t.G = (std::exp(-static_cast<double>(n) * theta * ce) - eps) / (1.0 - eps);
  return t;
}

double required_snr(double ce, int n, double theta, double eps) {
  if (!(ce > 0.0)) throw DomainError("required_snr: ce must be > 0");
  if (n < 1) throw DomainError("required_snr: n must be >= 1");
  if (!(theta > 0.0)) throw DomainError("required_snr: theta must be > 0");
  if (!(eps > 0.0 && eps < 1.0)) throw DomainError("required_snr: eps out of (0,1)");
  // The frontier is tested in the same form as the theta bound so the two
  // coincide bit-for-bit; the G <= 0 guard then only catches rounding
  // right at the edge.
  if (theta >= theta_upper_bound(n, ce, eps)) {
    throw InfeasibleEc(
        "required_snr: requested EC at or above the finite-blocklength "
        "bound for this eps");
  }
  const AsymptoticTerms t = make_asymptotic_terms(n, theta, eps, ce);
  if (t.G <= 0.0) {
    throw InfeasibleEc(
        "required_snr: requested EC at or above the finite-blocklength "
        "bound for this eps");
  }
  if (t.F <= 0.0) {
    throw InfeasibleConstraint(
        "required_snr: asymptotic coefficient F <= 0 (theta n <= ln 2)");
  }
  return 1.0 / specfun::lambert_w0(t.G / t.F);
}

PowerAllocResult optimal_power(int n, double theta, double eps, double mu,
                               double rho_max) {
  if (!(mu >= 0.0)) throw DomainError("optimal_power: mu must be >= 0");
  if (!(rho_max > 0.0)) throw DomainError("optimal_power: rho_max must be > 0");
  const double F = asymptotic_F(make_aux(n, theta, eps));
  if (F <= 0.0) {
    throw InfeasibleConstraint("optimal_power: asymptotic coefficient F <= 0");
  }
  const double sq = mu * n * theta * eps / ((1.0 - eps) * F);
  if (sq < 0.0) {
    throw InfeasibleConstraint("optimal_power: negative square-root argument");
  }
  const double s = std::sqrt(sq);

  PowerAllocResult r;
  r.rho_max = rho_max;
  if (mu == 0.0) {
    r.rho_star = rho_max;
    r.binding = Binding::PowerCap;
  } else {
    // 2/(sqrt(1+4s)-1) written as (sqrt(1+4s)+1)/(2s): no cancellation for
    // small s
    const double rho_deriv = (std::sqrt(1.0 + 4.0 * s) + 1.0) / (2.0 * s);
    if (rho_deriv < rho_max) {
      r.rho_star = rho_deriv;
      r.binding = Binding::DerivativeConstraint;
    } else {
      r.rho_star = rho_max;
      r.binding = Binding::PowerCap;
    }
  }
  r.eta_db = power_saving_db(r.rho_star, r.rho_max);
  SystemParams p{n, eps, theta, r.rho_star};
  r.ec_at_star = effective_capacity(p, EcMethod::ClosedForm).ec;
  p.rho = rho_max;
  r.ec_at_max = effective_capacity(p, EcMethod::ClosedForm).ec;
  r.high_snr_warning = r.rho_star < 10.0;
  return r;
}

double power_saving_db(double rho_star, double rho_max) {
  if (!(rho_star > 0.0) || rho_star > rho_max) {
    throw DomainError("power_saving_db: requires 0 < rho_star <= rho_max");
  }
  return 10.0 * std::log10(rho_max / rho_star);
}

double ec_derivative(const SystemParams& p) {
  validate(p);
  const double F = asymptotic_F(make_aux(p));
  const double psi = psi_closed_form(p);
  const double slope_shape = (1.0 + 1.0 / p.rho);
  return (1.0 - p.eps) / (p.n * p.theta * psi) * (F / (p.rho * p.rho)) *
         slope_shape * slope_shape;
}

}  // namespace ecfb
