#pragma once

// Finite-blocklength rate model over quasi-static Rayleigh fading: Shannon
// capacity, channel dispersion, the normal-approximation achievable rate,
// and the exponent kernel e^(-n theta r) that the effective-capacity
// expectation integrates.

namespace ecfb {

/// One operating point: blocklength, error probability, delay exponent
/// (per channel use) and linear transmit SNR.
struct SystemParams {
  int n = 500;
  double eps = 1e-4;
  double theta = 0.01;
  double rho = 100.0;
  bool allow_small_n = false;     // accept 100 > n >= 1 (approximation is
                                  // only validated for n >= 100)
  bool allow_eps_boundary = false;  // accept eps == 1 where the expectation
                                    // degenerates without touching Q^-1
};

/// Throws DomainError naming the violated precondition.
void validate(const SystemParams& p);

/// Derived triple of the closed form: alpha = -theta n / ln 2,
/// beta = theta sqrt(n) Q^-1(eps) log2 e, kappa = beta^2/2 + beta.
struct AuxParams {
  double alpha;
  double beta;
  double kappa;
};

AuxParams make_aux(int n, double theta, double eps);
AuxParams make_aux(const SystemParams& p);

enum class FadingKind { QuasiStaticRayleigh };

/// Quasi-static Rayleigh: power gain Z = |h|^2 is unit-mean exponential.
struct FadingModel {
  FadingKind kind = FadingKind::QuasiStaticRayleigh;
  double density(double z) const;  // e^-z on z >= 0
};

/// C(x) = log2(1 + x), bits per channel use.
double shannon_capacity(double x);

/// V(x) = (1 - (1+x)^-2) (log2 e)^2, evaluated in a cancellation-free form.
double channel_dispersion(double x);

/// Normal-approximation rate r = C(rho z) - sqrt(V(rho z)/n) Q^-1(eps).
/// Not clamped at zero; the closed-form integrals run over the unclamped
/// expression.
double achievable_rate(const SystemParams& p, double z);

/// e^(-n theta r(z)), computed in the log domain from the exact rate.
/// Equals (1 + rho z)^alpha e^(beta gamma) to machine precision.
/// Throws OverflowError if the exponent exceeds the double range.
double ec_kernel(const SystemParams& p, double z);

}  // namespace ecfb
