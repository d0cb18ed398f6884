#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ecfb/errors.hpp"
#include "ecfb/rate_kernel.hpp"
#include "ecfb/specfun.hpp"
#include "oracles.hpp"

using namespace ecfb;

namespace {
const SystemParams kRef{500, 1e-4, 0.01, 100.0};
}

TEST_CASE("params validation") {
  CHECK_NOTHROW(validate(kRef));
  SystemParams p = kRef;
  p.n = 50;
  CHECK_THROWS_AS(validate(p), DomainError);
  p.allow_small_n = true;
  CHECK_NOTHROW(validate(p));
  p = kRef;
  p.eps = 1.5;
  CHECK_THROWS_AS(validate(p), DomainError);
  p.eps = 0.0;
  CHECK_THROWS_AS(validate(p), DomainError);
  p.eps = 1.0;
  CHECK_THROWS_AS(validate(p), DomainError);
  p.allow_eps_boundary = true;
  CHECK_NOTHROW(validate(p));
  p = kRef;
  p.theta = 0.0;
  CHECK_THROWS_AS(validate(p), DomainError);
  p = kRef;
  p.rho = -1.0;
  CHECK_THROWS_AS(validate(p), DomainError);
}

TEST_CASE("aux params") {
  const AuxParams aux = make_aux(kRef);
  CHECK(aux.alpha == doctest::Approx(-7.213475204444817).epsilon(1e-14));
  CHECK(aux.beta == doctest::Approx(1.199741397520129).epsilon(1e-12));
  CHECK(aux.kappa == 0.5 * aux.beta * aux.beta + aux.beta);
  CHECK(aux.alpha < 0.0);
  // beta positive iff eps < 0.5
  CHECK(make_aux(500, 0.01, 0.4999).beta > 0.0);
  CHECK(make_aux(500, 0.01, 0.5001).beta < 0.0);

  // recomputing beta with Q^-1 round-tripped through Q
  const double q = specfun::gaussian_q(specfun::gaussian_q_inv(kRef.eps));
  const AuxParams aux2 = make_aux(kRef.n, kRef.theta, q);
  CHECK(std::fabs(aux2.beta - aux.beta) / aux.beta <= 1e-9);
}

TEST_CASE("fading model density") {
  FadingModel fading;
  CHECK(fading.kind == FadingKind::QuasiStaticRayleigh);
  CHECK(fading.density(0.0) == 1.0);
  CHECK(fading.density(1.0) == doctest::Approx(std::exp(-1.0)));
  // integrates to one
  const double mass = oracles::integrate_rel(
      [&](double z) { return fading.density(z); }, 0.0, 60.0, 1e-10);
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("shannon capacity") {
  CHECK(shannon_capacity(0.0) == 0.0);
  CHECK(shannon_capacity(1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(shannon_capacity(3.0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK_THROWS_AS(shannon_capacity(-0.1), DomainError);
}

TEST_CASE("channel dispersion") {
  CHECK(channel_dispersion(0.0) == 0.0);
  CHECK(std::fabs(channel_dispersion(1e9) - 2.0813689810056078) < 1e-9);
  CHECK(channel_dispersion(1.0) ==
        doctest::Approx(1.5610267357542058).epsilon(1e-14));
  CHECK_THROWS_AS(channel_dispersion(-1e-9), DomainError);
  // strictly increasing
  double prev = -1.0;
  for (double x : {0.0, 0.01, 0.1, 1.0, 10.0, 100.0}) {
    const double v = channel_dispersion(x);
    CHECK(v > prev);
    prev = v;
  }
}

TEST_CASE("achievable rate") {
  CHECK(achievable_rate(kRef, 0.0) == 0.0);

  SystemParams half = kRef;
  half.eps = 0.5;
  for (double z : {0.1, 1.0, 7.0}) {
    CHECK(achievable_rate(half, z) ==
          doctest::Approx(shannon_capacity(half.rho * z)).epsilon(1e-12));
  }

  // independent recomputation from the rate model pieces
  const double c = std::log2(101.0);
  const double pen = std::sqrt(channel_dispersion(100.0) / 500.0) *
                     specfun::gaussian_q_inv(1e-4);
  CHECK(c == doctest::Approx(6.6582114827517947).epsilon(1e-14));
  CHECK(pen == doctest::Approx(0.2399365181982567).epsilon(1e-9));
  CHECK(achievable_rate(kRef, 1.0) ==
        doctest::Approx(6.418274964553538).epsilon(1e-9));
  CHECK(achievable_rate(kRef, 1.0) == doctest::Approx(c - pen));
}

TEST_CASE("rate monotone in z and rho, bounded by capacity") {
  double prev = -1e9;
  for (double z : {0.0, 0.01, 0.1, 0.5, 1.0, 3.0, 10.0}) {
    const double r = achievable_rate(kRef, z);
    CHECK(r >= prev);
    prev = r;
    if (z > 0.0) CHECK(r < shannon_capacity(kRef.rho * z));
  }
  prev = -1e9;
  for (double rho : {1.0, 3.0, 10.0, 100.0, 1000.0}) {
    SystemParams p = kRef;
    p.rho = rho;
    const double r = achievable_rate(p, 1.0);
    CHECK(r >= prev);
    prev = r;
  }
}

TEST_CASE("ec kernel") {
  CHECK(ec_kernel(kRef, 0.0) == 1.0);

  SystemParams half = kRef;
  half.eps = 0.5;
  const AuxParams aux_half = make_aux(half);
  for (double z : {0.01, 1.0, 5.0}) {
    CHECK(ec_kernel(half, z) ==
          doctest::Approx(std::pow(1.0 + half.rho * z, aux_half.alpha))
              .epsilon(1e-12));
  }

  // matches exp(-n theta r) from the rate itself
  const double r = achievable_rate(kRef, 1.0);
  CHECK(ec_kernel(kRef, 1.0) ==
        doctest::Approx(std::exp(-500.0 * 0.01 * r)).epsilon(1e-11));
  CHECK(ec_kernel(kRef, 1.0) ==
        doctest::Approx(1.1558274323686972e-14).epsilon(1e-9));
}

TEST_CASE("ec kernel identity form") {
  const AuxParams aux = make_aux(kRef);
  for (double rho : {1.0, 10.0, 100.0, 1000.0}) {
    SystemParams p = kRef;
    p.rho = rho;
    const AuxParams a = make_aux(p);
    for (double z : {1e-6, 1e-3, 0.1, 1.0, 5.0, 20.0}) {
      const double u = rho * z;
      const double gamma = std::sqrt(1.0 - std::pow(1.0 + u, -2.0));
      const double direct =
          std::pow(1.0 + u, a.alpha) * std::exp(a.beta * gamma);
      const double kern = ec_kernel(p, z);
      if (kern > 0.0) {
        CHECK(std::fabs(kern - direct) / kern <= 1e-12);
      }
    }
  }
  (void)aux;
}

TEST_CASE("ec kernel overflow guard") {
  // exponent beyond the double range must raise rather than return inf
  SystemParams p{100, 1e-300, 2000.0, 1.0, true};
  CHECK_THROWS_AS(ec_kernel(p, 1e-4), OverflowError);
}
