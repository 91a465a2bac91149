#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace glmdiag {

// log Gamma(x) for x > 0.  Lanczos-type rational approximation, full double
// precision over the whole positive axis.
inline double log_gamma(double x) {
  if (!(x > 0.0)) {
    throw std::domain_error("log_gamma: requires x > 0, got " + std::to_string(x));
  }
  static const double cof[14] = {
      57.1562356658629235,      -59.5979603554754912,
      14.1360979747417471,      -0.491913816097620199,
      0.339946499848118887e-4,   0.465236289270485756e-4,
      -0.983744753048795646e-4,  0.158088703224912494e-3,
      -0.210264441724104883e-3,  0.217439618115212643e-3,
      -0.164318106536763890e-3,  0.844182239838527433e-4,
      -0.261908384015814087e-4,  0.368991826595316234e-5};
  double y = x;
  double tmp = x + 5.24218750000000000;
  tmp = (x + 0.5) * std::log(tmp) - tmp;
  double ser = 0.999999999999997092;
  for (int j = 0; j < 14; ++j) ser += cof[j] / ++y;
  return tmp + std::log(2.5066282746310005 * ser / x);
}

// digamma = d/dx log Gamma(x), x > 0.  Recurrence up to x >= 10, then the
// asymptotic Bernoulli series (terms through x^-12 keep the tail below 1e-15).
inline double digamma(double x) {
  if (!(x > 0.0)) {
    throw std::domain_error("digamma: requires x > 0, got " + std::to_string(x));
  }
  double acc = 0.0;
  while (x < 10.0) {
    acc -= 1.0 / x;
    x += 1.0;
  }
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  const double tail =
      inv2 * (1.0 / 12.0 -
              inv2 * (1.0 / 120.0 -
                      inv2 * (1.0 / 252.0 -
                              inv2 * (1.0 / 240.0 -
                                      inv2 * (1.0 / 132.0 - inv2 * 691.0 / 32760.0)))));
  return acc + std::log(x) - 0.5 * inv - tail;
}

// trigamma = d^2/dx^2 log Gamma(x), x > 0.
inline double trigamma(double x) {
  if (!(x > 0.0)) {
    throw std::domain_error("trigamma: requires x > 0, got " + std::to_string(x));
  }
  double acc = 0.0;
  while (x < 10.0) {
    acc += 1.0 / (x * x);
    x += 1.0;
  }
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  const double series =
      inv * (1.0 + 0.5 * inv +
             inv2 * (1.0 / 6.0 -
                     inv2 * (1.0 / 30.0 -
                             inv2 * (1.0 / 42.0 -
                                     inv2 * (1.0 / 30.0 - inv2 * 5.0 / 66.0)))));
  return acc + series;
}

namespace detail {

// Lower regularized incomplete gamma by its power series; valid for x < a + 1.
inline double gamma_p_series(double a, double x) {
  double ap = a;
  double del = 1.0 / a;
  double sum = del;
  for (int n = 0; n < 100000; ++n) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::fabs(del) < std::fabs(sum) * 1e-16) {
      return sum * std::exp(-x + a * std::log(x) - log_gamma(a));
    }
  }
  throw std::runtime_error("gamma_p: series did not converge");
}

// Upper regularized incomplete gamma by modified Lentz continued fraction;
// valid for x >= a + 1.
inline double gamma_q_contfrac(double a, double x) {
  const double eps = 1e-16;
  const double fpmin = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / fpmin;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 100000; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < fpmin) d = fpmin;
    c = b + an / c;
    if (std::fabs(c) < fpmin) c = fpmin;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) <= eps) {
      return std::exp(-x + a * std::log(x) - log_gamma(a)) * h;
    }
  }
  throw std::runtime_error("gamma_p: continued fraction did not converge");
}

}  // namespace detail

// Regularized lower incomplete gamma P(a, x): series branch for x < a + 1,
// continued-fraction branch otherwise.
inline double gamma_p(double a, double x) {
  if (!(a > 0.0) || !(x >= 0.0)) {
    throw std::domain_error("gamma_p: requires a > 0 and x >= 0");
  }
  if (x == 0.0) return 0.0;
  if (x < a + 1.0) return detail::gamma_p_series(a, x);
  return 1.0 - detail::gamma_q_contfrac(a, x);
}

}  // namespace glmdiag
