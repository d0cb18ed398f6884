#pragma once

// Adaptive Gauss-Kronrod (7-15) quadrature on a finite interval.
// Globally adaptive: the segment with the largest error estimate is split
// until the summed estimate meets the requested tolerance. Deterministic and
// allocation-local, so concurrent callers need no synchronization.

#include <algorithm>
#include <cmath>
#include <queue>
#include <vector>

#include "ecfb/errors.hpp"

namespace ecfb::quad {

struct QuadResult {
  double value = 0.0;
  double error = 0.0;  // summed segment error estimate (absolute)
  int evaluations = 0;
};

namespace detail {

// 15-point Kronrod abscissae/weights with the embedded 7-point Gauss rule.
inline constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b, value, error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

// One GK15 evaluation; the error estimate follows the QUADPACK scaling of
// |K15 - G7| by the integrand's deviation from its mean.
template <class F>
Segment gk15(F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);

  const double fc = f(center);
  double result_gauss = kWg[3] * fc;
  double result_kronrod = kWgk[7] * fc;
  double resabs = std::fabs(result_kronrod);
  double fv[15];
  fv[7] = fc;
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double f1 = f(center - dx);
    const double f2 = f(center + dx);
    fv[j] = f1;
    fv[14 - j] = f2;
    result_kronrod += kWgk[j] * (f1 + f2);
    resabs += kWgk[j] * (std::fabs(f1) + std::fabs(f2));
    if (j % 2 == 1) {
      result_gauss += kWg[j / 2] * (f1 + f2);
    }
  }
  const double mean = 0.5 * result_kronrod;
  double resasc = kWgk[7] * std::fabs(fc - mean);
  for (int j = 0; j < 7; ++j) {
    resasc += kWgk[j] *
              (std::fabs(fv[j] - mean) + std::fabs(fv[14 - j] - mean));
  }
  resasc *= std::fabs(half);
  resabs *= std::fabs(half);

  double err = std::fabs((result_kronrod - result_gauss) * half);
  if (resasc != 0.0 && err != 0.0) {
    err = resasc * std::fmin(1.0, std::pow(200.0 * err / resasc, 1.5));
  }
  const double round_off = 50.0 * std::numeric_limits<double>::epsilon();
  if (resabs > std::numeric_limits<double>::min() / round_off) {
    err = std::fmax(err, round_off * resabs);
  }
  return {a, b, result_kronrod * half, err};
}

}  // namespace detail

/// Integrate f over [a, b] to the given relative tolerance (with an optional
/// absolute floor). `breakpoints` seeds the initial subdivision; endpoints
/// are implied. Throws QuadratureError if the segment budget is exhausted
/// before the tolerance is met.
template <class F>
QuadResult integrate(F&& f, double a, double b, double rel_tol,
                     double abs_tol = 0.0,
                     const std::vector<double>& breakpoints = {},
                     int max_segments = 4096) {
  std::vector<double> knots{a, b};
  for (double x : breakpoints) {
    if (x > a && x < b) knots.push_back(x);
  }
  std::sort(knots.begin(), knots.end());
  knots.erase(std::unique(knots.begin(), knots.end()), knots.end());

  std::priority_queue<detail::Segment> heap;
  double total = 0.0, total_err = 0.0;
  int evals = 0;
  int segments = 0;
  for (size_t i = 0; i + 1 < knots.size(); ++i) {
    auto seg = detail::gk15(f, knots[i], knots[i + 1]);
    evals += 15;
    ++segments;
    total += seg.value;
    total_err += seg.error;
    heap.push(seg);
  }

  while (total_err > std::fmax(rel_tol * std::fabs(total), abs_tol)) {
    if (segments >= max_segments) {
      throw QuadratureError(
          "integrate: tolerance unattained within segment budget");
    }
    auto worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) {
      // interval at floating-point resolution; error cannot be reduced
      heap.push({worst.a, worst.b, worst.value, 0.0});
      total_err -= worst.error;
      continue;
    }
    auto left = detail::gk15(f, worst.a, mid);
    auto right = detail::gk15(f, mid, worst.b);
    evals += 30;
    ++segments;
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }
  return {total, total_err, evals};
}

}  // namespace ecfb::quad
