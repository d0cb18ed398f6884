#include "ecfb/rate_kernel.hpp"

#include <cmath>

#include "ecfb/errors.hpp"
#include "ecfb/specfun.hpp"

namespace ecfb {

namespace {
constexpr double kLn2 = 0.6931471805599453094172321;
constexpr double kLog2E = 1.4426950408889634073599247;
}  // namespace

void validate(const SystemParams& p) {
  if (p.n < 1) throw DomainError("n must be >= 1");
  if (p.n < 100 && !p.allow_small_n) {
    throw DomainError(
        "n below 100 is outside the validated range of the rate "
        "approximation (pass allow_small_n to override)");
  }
  const bool eps_ok =
      (p.eps > 0.0 && p.eps < 1.0) || (p.eps == 1.0 && p.allow_eps_boundary);
  if (!eps_ok) throw DomainError("eps out of (0,1)");
  if (!(p.theta > 0.0) || !std::isfinite(p.theta)) {
    throw DomainError("theta must be > 0");
  }
  if (!(p.rho > 0.0) || !std::isfinite(p.rho)) {
    throw DomainError("rho must be > 0");
  }
}

AuxParams make_aux(int n, double theta, double eps) {
  const double nd = static_cast<double>(n);
  const double alpha = -theta * nd / kLn2;
  const double beta =
      theta * std::sqrt(nd) * specfun::gaussian_q_inv(eps) * kLog2E;
  return {alpha, beta, 0.5 * beta * beta + beta};
}

AuxParams make_aux(const SystemParams& p) {
  return make_aux(p.n, p.theta, p.eps);
}

double FadingModel::density(double z) const {
  return z >= 0.0 ? std::exp(-z) : 0.0;
}

double shannon_capacity(double x) {
  if (!(x >= 0.0)) throw DomainError("shannon_capacity: x must be >= 0");
  return std::log1p(x) * kLog2E;
}

double channel_dispersion(double x) {
  if (!(x >= 0.0)) throw DomainError("channel_dispersion: x must be >= 0");
  // 1 - (1+x)^-2 = x (2+x) / (1+x)^2, exact at small x
  const double onep = 1.0 + x;
  return (x * (2.0 + x) / (onep * onep)) * kLog2E * kLog2E;
}

double achievable_rate(const SystemParams& p, double z) {
  validate(p);
  if (!(z >= 0.0)) throw DomainError("achievable_rate: z must be >= 0");
  const double x = p.rho * z;
  return shannon_capacity(x) -
         std::sqrt(channel_dispersion(x) / p.n) * specfun::gaussian_q_inv(p.eps);
}

double ec_kernel(const SystemParams& p, double z) {
  validate(p);
  if (!(z >= 0.0)) throw DomainError("ec_kernel: z must be >= 0");
  const AuxParams aux = make_aux(p);
  const double u = p.rho * z;
  // gamma = sqrt(1 - (1+u)^-2) in the same cancellation-free form as V
  const double gamma = std::sqrt(u * (2.0 + u)) / (1.0 + u);
  const double exponent = aux.alpha * std::log1p(u) + aux.beta * gamma;
  if (exponent > 709.0) {
    throw OverflowError("ec_kernel: exponent exceeds double range");
  }
  if (exponent < -745.0) return 0.0;
  return std::exp(exponent);
}

}  // namespace ecfb
