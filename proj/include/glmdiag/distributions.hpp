#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "glmdiag/special.hpp"

namespace glmdiag {

// Gamma law in mean/dispersion form: E[Y] = mu, Var[Y] = sigma^2 mu^2
// (shape 1/sigma^2, scale mu sigma^2).
struct GammaParams {
  double mu;
  double sigma;

  GammaParams(double mu_, double sigma_) : mu(mu_), sigma(sigma_) {
    if (!(mu > 0.0) || !std::isfinite(mu)) {
      throw std::domain_error("GammaParams: mu must be positive, got " + std::to_string(mu_));
    }
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
      throw std::domain_error("GammaParams: sigma must be positive, got " + std::to_string(sigma_));
    }
  }
  double shape() const { return 1.0 / (sigma * sigma); }
  double scale() const { return mu * sigma * sigma; }
};

// Inverse Gaussian law in mean/dispersion form: E[Y] = mu, Var[Y] = sigma^2 mu^3
// (shape lambda = 1/sigma^2).
struct InvGaussParams {
  double mu;
  double sigma;

  InvGaussParams(double mu_, double sigma_) : mu(mu_), sigma(sigma_) {
    if (!(mu > 0.0) || !std::isfinite(mu)) {
      throw std::domain_error("InvGaussParams: mu must be positive, got " + std::to_string(mu_));
    }
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
      throw std::domain_error("InvGaussParams: sigma must be positive, got " + std::to_string(sigma_));
    }
  }
  double lambda() const { return 1.0 / (sigma * sigma); }
};

inline double normal_pdf(double z) {
  return 0.3989422804014326779 * std::exp(-0.5 * z * z);
}

inline double normal_cdf(double z) {
  if (!std::isfinite(z)) {
    throw std::domain_error("normal_cdf: non-finite input");
  }
  return 0.5 * std::erfc(-z * 0.7071067811865475244);
}

// log Phi(z), finite for every finite z.  Three regimes: log1p form for z > 0
// (keeps precision when Phi is within ulps of 1), direct log in the normal
// range, and the Mills-ratio asymptotic once erfc would go subnormal.
inline double normal_logcdf(double z) {
  if (!std::isfinite(z)) {
    throw std::domain_error("normal_logcdf: non-finite input");
  }
  if (z > 0.0) {
    return std::log1p(-0.5 * std::erfc(z * 0.7071067811865475244));
  }
  if (z > -37.0) {
    return std::log(0.5 * std::erfc(-z * 0.7071067811865475244));
  }
  const double z2 = z * z;
  const double corr =
      1.0 - 1.0 / z2 * (1.0 - 3.0 / z2 * (1.0 - 5.0 / z2 * (1.0 - 7.0 / z2 * (1.0 - 9.0 / z2))));
  return -0.5 * z2 - 0.91893853320467274178 - std::log(-z) + std::log(corr);
}

namespace detail {

// Wichura's PPND16 rational approximations for the standard normal quantile.
inline double normal_quantile_ppnd16(double p) {
  const double q = p - 0.5;
  double r;
  if (std::fabs(q) <= 0.425) {
    r = 0.180625 - q * q;
    const double num =
        (((((((2509.0809287301226727 * r + 33430.575583588128105) * r + 67265.770927008700853) * r +
             45921.953931549871457) * r + 13731.693765509461125) * r + 1971.5909503065514427) * r +
          133.14166789178437745) * r + 3.387132872796366608);
    const double den =
        (((((((5226.495278852545703 * r + 28729.085735721942674) * r + 39307.89580009271061) * r +
             21213.794301586595867) * r + 5394.1960214247511077) * r + 687.1870074920579083) * r +
          42.313330701600911252) * r + 1.0);
    return q * num / den;
  }
  r = (q < 0.0) ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double x;
  if (r <= 5.0) {
    r -= 1.6;
    const double num =
        (((((((7.7454501427834140764e-4 * r + 0.0227238449892691845833) * r + 0.24178072517745061177) * r +
             1.27045825245236838258) * r + 3.64784832476320460504) * r + 5.7694972214606914055) * r +
          4.6303378461565452959) * r + 1.42343711074968357734);
    const double den =
        (((((((1.05075007164441684324e-9 * r + 5.475938084995344946e-4) * r + 0.0151986665636164571966) * r +
             0.14810397642748007459) * r + 0.68976733498510000455) * r + 1.6763848301838038494) * r +
          2.05319162663775882187) * r + 1.0);
    x = num / den;
  } else {
    r -= 5.0;
    const double num =
        (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r + 0.0012426609473880784386) * r +
             0.026532189526576123093) * r + 0.29656057182850489123) * r + 1.7848265399172913358) * r +
          5.4637849111641143699) * r + 6.6579046435011037772);
    const double den =
        (((((((2.04426310338993978564e-15 * r + 1.4215117583164458887e-7) * r + 1.8463183175100546818e-5) * r +
             7.868691311456132591e-4) * r + 0.0148753612908506148525) * r + 0.13692988092273580531) * r +
          0.59983220655588793769) * r + 1.0);
    x = num / den;
  }
  return (q < 0.0) ? -x : x;
}

// Quantile for p <= 0.5 with one guarded Newton polish against normal_cdf.
inline double normal_quantile_lower(double p) {
  double x = normal_quantile_ppnd16(p);
  const double pdf = normal_pdf(x);
  if (pdf > 1e-305) {
    x -= (normal_cdf(x) - p) / pdf;
  }
  return x;
}

}  // namespace detail

// Phi^{-1}(p) for p in (0,1).  Upper-tail arguments are reflected so the
// polish step always runs in the well-conditioned lower tail (1 - p is exact
// for p >= 0.5).
inline double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::domain_error("normal_quantile: p must lie in (0,1), got " + std::to_string(p));
  }
  if (p > 0.5) return -detail::normal_quantile_lower(1.0 - p);
  return detail::normal_quantile_lower(p);
}

inline double gamma_pdf(double y, const GammaParams& p) {
  if (!(y > 0.0)) {
    throw std::domain_error("gamma_pdf: y must be positive, got " + std::to_string(y));
  }
  const double a = p.shape();
  const double s = p.scale();
  return std::exp((a - 1.0) * std::log(y) - y / s - log_gamma(a) - a * std::log(s));
}

inline double gamma_cdf(double y, const GammaParams& p) {
  if (!(y > 0.0)) {
    throw std::domain_error("gamma_cdf: y must be positive, got " + std::to_string(y));
  }
  return gamma_p(p.shape(), y / p.scale());
}

// Inverse of gamma_cdf by bracketed Newton with bisection fallback,
// tolerance 1e-12 in probability.  Works on the standard (unit scale) gamma
// and rescales at the end.
inline double gamma_quantile(double prob, const GammaParams& p) {
  if (!(prob > 0.0 && prob < 1.0)) {
    throw std::domain_error("gamma_quantile: p must lie in (0,1), got " + std::to_string(prob));
  }
  const double a = p.shape();

  // Wilson-Hilferty start; small-p asymptote when that collapses.
  const double z = normal_quantile(prob);
  const double t = 1.0 - 1.0 / (9.0 * a) + z / (3.0 * std::sqrt(a));
  double x = (t > 0.0) ? a * t * t * t
                       : std::exp((std::log(prob) + log_gamma(a + 1.0)) / a);
  if (!(x > 0.0) || !std::isfinite(x)) x = a;

  double lo = x, hi = x;
  double flo = gamma_p(a, lo) - prob;
  double fhi = flo;
  for (int i = 0; i < 200 && flo > 0.0; ++i) {
    lo *= 0.5;
    flo = gamma_p(a, lo) - prob;
  }
  for (int i = 0; i < 200 && fhi < 0.0; ++i) {
    hi *= 2.0;
    fhi = gamma_p(a, hi) - prob;
  }
  if (flo > 0.0 || fhi < 0.0) {
    throw std::runtime_error("gamma_quantile: failed to bracket the root");
  }

  x = std::min(std::max(x, lo), hi);
  const double tol = std::min(1e-12, std::max(1e-15, prob * 1e-13));
  for (int iter = 0; iter < 300; ++iter) {
    const double f = gamma_p(a, x) - prob;
    if (std::fabs(f) < tol) break;
    if (f > 0.0) hi = x; else lo = x;
    const double dens = std::exp((a - 1.0) * std::log(x) - x - log_gamma(a));
    double next = (dens > 0.0) ? x - f / dens : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::fabs(next - x) < 1e-15 * x) { x = next; break; }
    x = next;
  }
  return x * p.scale();
}

// Inverse Gaussian density in the mean/dispersion parameterization.
inline double invgauss_pdf(double y, const InvGaussParams& p) {
  if (!(y > 0.0)) {
    throw std::domain_error("invgauss_pdf: y must be positive, got " + std::to_string(y));
  }
  const double lam = p.lambda();
  const double d = y - p.mu;
  return std::exp(0.5 * (std::log(lam) - 1.8378770664093454836 - 3.0 * std::log(y)) -
                  lam * d * d / (2.0 * p.mu * p.mu * y));
}

// F(y) = Phi(sqrt(lam/y)(y/mu - 1)) + exp(2 lam/mu) Phi(-sqrt(lam/y)(y/mu + 1)).
// The second term is assembled in log space: exp(2 lam/mu) alone overflows for
// dispersions as small as the simulation scenarios use.
inline double invgauss_cdf(double y, const InvGaussParams& p) {
  if (!(y > 0.0)) {
    throw std::domain_error("invgauss_cdf: y must be positive, got " + std::to_string(y));
  }
  const double lam = p.lambda();
  const double r = std::sqrt(lam / y);
  const double u = y / p.mu;
  const double first = normal_cdf(r * (u - 1.0));
  const double log_second = 2.0 * lam / p.mu + normal_logcdf(-r * (u + 1.0));
  const double cdf = first + std::exp(std::min(log_second, 0.0));
  return std::min(cdf, 1.0);
}

// Clamp a probability strictly inside (0,1) so that Phi^{-1} stays finite.
inline double clamp_unit_interior(double p) {
  const double lo = std::numeric_limits<double>::min();
  const double hi = 1.0 - std::numeric_limits<double>::epsilon() / 2.0;
  if (!(p > lo)) return lo;
  if (!(p < hi)) return hi;
  return p;
}

}  // namespace glmdiag
