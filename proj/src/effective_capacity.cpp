#include "ecfb/effective_capacity.hpp"

#include <cmath>
#include <vector>

#include "ecfb/errors.hpp"
#include "ecfb/quadrature.hpp"
#include "ecfb/specfun.hpp"

namespace ecfb {

namespace {

constexpr double kTailTol = 1e-16;
constexpr double kQuadRelTol = 1e-10;

double ec_from_psi(double psi, int n, double theta) {
  return -std::log(psi) / (n * theta);
}

// Kernel of the expectation at gain z, in log-domain form (identical to
// ec_kernel but with aux precomputed; the oracle evaluates it ~10^3 times
// per point).
double kernel_at(const AuxParams& aux, double rho, double z) {
  const double u = rho * z;
  const double gamma = std::sqrt(u * (2.0 + u)) / (1.0 + u);
  const double exponent = aux.alpha * std::log1p(u) + aux.beta * gamma;
  if (exponent < -745.0) return 0.0;
  return std::exp(exponent);
}

}  // namespace

double psi_oracle(const SystemParams& p, double* err_estimate) {
  validate(p);
  if (p.eps == 1.0) {
    // integrand degenerates to the gain density itself
    if (err_estimate) *err_estimate = 0.0;
    return 1.0;
  }
  const AuxParams aux = make_aux(p);
  const double eps = p.eps;
  const double rho = p.rho;

  double z_max = -std::log(kTailTol);
  // The analytic tail bound needs the kernel below 1 past the cutoff; at
  // very low SNR the rate can still be negative there, so push out until it
  // has decayed.
  while (kernel_at(aux, rho, z_max) > 1.0 && z_max < 600.0) z_max += 10.0;

  auto integrand = [&](double z) {
    return (eps + (1.0 - eps) * kernel_at(aux, rho, z)) * std::exp(-z);
  };
  // The kernel behaves like e^(beta sqrt(2 rho z)) near z = 0; mapping
  // z = t^2 on the first piece removes the cusp the Kronrod error estimate
  // misjudges.
  const double z_split = std::fmin(1.0, z_max);
  auto inner = [&](double t) { return integrand(t * t) * 2.0 * t; };
  const double t_split = std::sqrt(z_split);
  auto res_inner =
      quad::integrate(inner, 0.0, t_split, kQuadRelTol, 0.0,
                      {std::sqrt(1.0 / rho), std::sqrt(10.0 / rho)});
  auto res_outer = quad::integrate(integrand, z_split, z_max, kQuadRelTol,
                                   0.0, {5.0, 15.0});
  if (err_estimate) *err_estimate = res_inner.error + res_outer.error;
  return res_inner.value + res_outer.value;
}

double psi_closed_form(const SystemParams& p, double* cancellation) {
  validate(p);
  if (p.eps == 1.0) {
    if (cancellation) *cancellation = 0.0;
    return 1.0;
  }
  const AuxParams aux = make_aux(p);
  const double x = 1.0 / p.rho;
  if (x > 709.0) {
    throw OverflowError(
        "psi_closed_form: e^(1/rho) exceeds the double range below "
        "rho ~ 1.4e-3; use the quadrature oracle at such SNR");
  }

  // rho^alpha Gamma(alpha+1, 1/rho) = E_{-alpha}(1/rho) / rho for
  // alpha <= -1; the identity removes the factor that underflows at large
  // rho |alpha|. For -1 < alpha < 0 the order alpha+1 is positive and the
  // plain product stays in range (|alpha| < 1).
  double t1;
  if (aux.alpha + 1.0 > 0.0) {
    t1 = (aux.kappa + 1.0) * std::exp(aux.alpha * std::log(p.rho)) *
         specfun::upper_inc_gamma(aux.alpha + 1.0, x);
  } else {
    t1 = (aux.kappa + 1.0) * specfun::gen_exp_integral(-aux.alpha, x) / p.rho;
  }
  const double t2 = (aux.kappa - 0.5 * aux.beta) *
                    specfun::gen_exp_integral(2.0 - aux.alpha, x) / p.rho;

  const double diff = t1 - t2;
  const double scale = std::fabs(t1) + std::fabs(t2);
  if (cancellation) *cancellation = scale > 0.0 ? std::fabs(diff) / scale : 0.0;
  if (scale > 1e6 * std::fabs(diff)) {
    throw NumericalInstability(
        "psi_closed_form: catastrophic cancellation between gamma terms");
  }
  const double j = std::exp(x) * diff;
  return p.eps + (1.0 - p.eps) * j;
}

EcResult effective_capacity(const SystemParams& p, EcMethod method) {
  EcResult r;
  r.method = method;
  r.psi = method == EcMethod::ClosedForm ? psi_closed_form(p, &r.diagnostic)
                                         : psi_oracle(p, &r.diagnostic);
  // psi < eps contradicts the high-SNR bound and can only arise from
  // rounding; clamp rather than report EC above the bound.
  if (p.eps < 1.0 && r.psi < p.eps) {
    r.psi = p.eps;
    r.floored_at_eps = true;
  }
  r.ec = ec_from_psi(r.psi, p.n, p.theta);
  return r;
}

double ec_upper_bound(int n, double theta, double eps, bool allow_small_n) {
  if (n < 100 && !allow_small_n) throw DomainError("n must be >= 100");
  if (n < 1) throw DomainError("n must be >= 1");
  if (!(eps > 0.0 && eps < 1.0)) throw DomainError("eps out of (0,1)");
  if (!(theta > 0.0)) throw DomainError("theta must be > 0");
  return -std::log(eps) / (n * theta);
}

double theta_upper_bound(int n, double ce, double eps) {
  if (n < 1) throw DomainError("n must be >= 1");
  if (!(ce > 0.0)) throw DomainError("ce must be > 0");
  if (!(eps > 0.0 && eps < 1.0)) throw DomainError("eps out of (0,1)");
  return -std::log(eps) / (n * ce);
}

double delay_outage_prob(double theta, double ce, double d_max) {
  if (!(theta > 0.0)) throw DomainError("theta must be > 0");
  if (!(ce >= 0.0)) throw DomainError("ce must be >= 0");
  if (!(d_max > 0.0)) throw DomainError("d_max must be > 0");
  return std::exp(-theta * ce * d_max);
}

double ec_shannon_infinite(int n, double theta, double rho,
                           bool allow_small_n) {
  if (n < 100 && !allow_small_n) throw DomainError("n must be >= 100");
  if (n < 1) throw DomainError("n must be >= 1");
  if (!(theta > 0.0)) throw DomainError("theta must be > 0");
  if (!(rho > 0.0)) throw DomainError("rho must be > 0");
  const double alpha = -theta * n / std::log(2.0);
  const double x = 1.0 / rho;
  if (x > 709.0) {
    throw OverflowError(
        "ec_shannon_infinite: e^(1/rho) exceeds the double range");
  }
  // E_Z[(1 + rho z)^alpha] = e^(1/rho) rho^alpha Gamma(alpha+1, 1/rho),
  // exact for the Shannon-model kernel.
  double core;
  if (alpha + 1.0 > 0.0) {
    core = std::exp(alpha * std::log(rho)) *
           specfun::upper_inc_gamma(alpha + 1.0, x);
  } else {
    core = specfun::gen_exp_integral(-alpha, x) / rho;
  }
  const double psi = std::exp(x) * core;
  return ec_from_psi(psi, n, theta);
}

EpsilonOptResult optimal_epsilon(int n, double theta, double rho,
                                 EcMethod backend) {
  SystemParams base{n, 0.5, theta, rho};
  validate(base);

  auto psi_at = [&](double eps) {
    SystemParams p = base;
    p.eps = eps;
    return backend == EcMethod::ClosedForm ? psi_closed_form(p)
                                           : psi_oracle(p);
  };

  double lo = 1e-12;
  double hi = 0.5;
  // psi still decreasing at the right endpoint means the minimizer is not
  // ultra-reliable at all; retry on the near-full interval.
  if (psi_at(hi * (1.0 - 1e-4)) > psi_at(hi)) {
    hi = 1.0 - 1e-9;
    if (psi_at(hi * (1.0 - 1e-6)) > psi_at(hi)) {
      throw NotUnimodal(
          "optimal_epsilon: psi decreasing up to the eps = 1 boundary");
    }
  }

  // golden section in t = ln(eps); bracket width target 1e-3 relative
  const double gr = 0.6180339887498949;
  double a = std::log(lo);
  double b = std::log(hi);
  const double t_tol = std::log1p(1e-3);
  double c = b - gr * (b - a);
  double d = a + gr * (b - a);
  double fc = psi_at(std::exp(c));
  double fd = psi_at(std::exp(d));
  int iter = 2;
  while (b - a > t_tol) {
    if (iter >= 200) {
      throw ConvergenceError("optimal_epsilon: iteration budget exhausted");
    }
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = psi_at(std::exp(c));
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = psi_at(std::exp(d));
    }
    ++iter;
  }

  EpsilonOptResult out;
  const double t_star = fc < fd ? c : d;
  const double psi_star = std::fmin(fc, fd);
  out.eps_star = std::exp(t_star);
  out.ec_max = ec_from_psi(psi_star, n, theta);
  out.iterations = iter;
  out.bracket_lo = std::exp(a);
  out.bracket_hi = std::exp(b);
  return out;
}

}  // namespace ecfb
