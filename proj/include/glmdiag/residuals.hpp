#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "glmdiag/distributions.hpp"
#include "glmdiag/glm.hpp"

namespace glmdiag {

enum class ResidualKind {
  quantile,
  adjusted_quantile,
  deviance_std,
  pearson_std,
  williams,
  anscombe_std,
};

inline constexpr ResidualKind kAllResidualKinds[] = {
    ResidualKind::quantile,     ResidualKind::adjusted_quantile, ResidualKind::deviance_std,
    ResidualKind::pearson_std,  ResidualKind::williams,          ResidualKind::anscombe_std,
};

inline std::string residual_kind_name(ResidualKind k) {
  switch (k) {
    case ResidualKind::quantile: return "quantile";
    case ResidualKind::adjusted_quantile: return "adjusted_quantile";
    case ResidualKind::deviance_std: return "deviance";
    case ResidualKind::pearson_std: return "pearson";
    case ResidualKind::williams: return "williams";
    case ResidualKind::anscombe_std: return "anscombe";
  }
  return "?";
}

inline ResidualKind parse_residual_kind(std::string_view s) {
  if (s == "quantile" || s == "qu") return ResidualKind::quantile;
  if (s == "adjusted_quantile" || s == "adj_quantile" || s == "aqu") {
    return ResidualKind::adjusted_quantile;
  }
  if (s == "deviance" || s == "dev") return ResidualKind::deviance_std;
  if (s == "pearson" || s == "pea") return ResidualKind::pearson_std;
  if (s == "williams" || s == "wil") return ResidualKind::williams;
  if (s == "anscombe" || s == "ans") return ResidualKind::anscombe_std;
  throw std::invalid_argument("unknown residual kind: " + std::string(s));
}

struct ResidualSet {
  ResidualKind kind;
  std::vector<double> values;
  const FittedModel* model = nullptr;
};

namespace detail {

inline void require_converged(const FittedModel& m, const char* who) {
  if (!m.converged) {
    throw std::invalid_argument(std::string(who) + ": model has not converged");
  }
}

inline double family_cdf(Family f, double y, double mu, double sigma) {
  return f == Family::gamma ? gamma_cdf(y, GammaParams(mu, sigma))
                            : invgauss_cdf(y, InvGaussParams(mu, sigma));
}

inline double quantile_value(const FittedModel& m, Eigen::Index i) {
  const double u = clamp_unit_interior(family_cdf(m.family, m.y[i], m.mu[i], m.sigma));
  return normal_quantile(u);
}

inline double deviance_value(const FittedModel& m, Eigen::Index i) {
  const double y = m.y[i], mu = m.mu[i];
  const double root = std::sqrt(unit_deviance(m.family, y, mu));
  const double signed_root = (y >= mu) ? root : -root;
  return signed_root / (m.sigma * std::sqrt(1.0 - m.leverage[i]));
}

inline double pearson_value(const FittedModel& m, Eigen::Index i) {
  const double y = m.y[i], mu = m.mu[i];
  return (y - mu) /
         (m.sigma * std::sqrt(variance_function(m.family, mu) * (1.0 - m.leverage[i])));
}

inline double anscombe_value(const FittedModel& m, Eigen::Index i) {
  const double y = m.y[i], mu = m.mu[i];
  double num, dpsi;
  if (m.family == Family::gamma) {
    num = 3.0 * (std::cbrt(y) - std::cbrt(mu));
    dpsi = std::pow(mu, -2.0 / 3.0);
  } else {
    num = std::log(y) - std::log(mu);
    dpsi = 1.0 / mu;
  }
  const double den = m.sigma * std::sqrt(variance_function(m.family, mu)) * dpsi *
                     std::sqrt(1.0 - m.leverage[i]);
  return num / den;
}

}  // namespace detail

// r_i = Phi^{-1}(F(y_i; mu_i, sigma)); exactly standard normal when the
// parameters are the truth.  The CDF value is clamped inside (0,1) first.
inline ResidualSet quantile_residual(const FittedModel& m) {
  detail::require_converged(m, "quantile_residual");
  ResidualSet out{ResidualKind::quantile, {}, &m};
  out.values.resize(m.y.size());
  for (Eigen::Index i = 0; i < m.y.size(); ++i) out.values[i] = detail::quantile_value(m, i);
  return out;
}

// Quantile residual divided by sqrt(1 - h_ii).
inline ResidualSet adjusted_quantile_residual(const FittedModel& m) {
  detail::require_converged(m, "adjusted_quantile_residual");
  ResidualSet out{ResidualKind::adjusted_quantile, {}, &m};
  out.values.resize(m.y.size());
  for (Eigen::Index i = 0; i < m.y.size(); ++i) {
    const double h = m.leverage[i];
    if (!(h < 1.0)) {
      throw std::domain_error("adjusted_quantile_residual: leverage of observation " +
                              std::to_string(i + 1) + " is " + std::to_string(h) +
                              " (>= 1, degenerate)");
    }
    out.values[i] = detail::quantile_value(m, i) / std::sqrt(1.0 - h);
  }
  return out;
}

// sign(y - mu) sqrt(d_u) / (sigma sqrt(1 - h)).
inline ResidualSet deviance_residual_std(const FittedModel& m) {
  detail::require_converged(m, "deviance_residual_std");
  ResidualSet out{ResidualKind::deviance_std, {}, &m};
  out.values.resize(m.y.size());
  for (Eigen::Index i = 0; i < m.y.size(); ++i) out.values[i] = detail::deviance_value(m, i);
  return out;
}

// (y - mu) / (sigma sqrt(V(mu) (1 - h))).
inline ResidualSet pearson_residual_std(const FittedModel& m) {
  detail::require_converged(m, "pearson_residual_std");
  ResidualSet out{ResidualKind::pearson_std, {}, &m};
  out.values.resize(m.y.size());
  for (Eigen::Index i = 0; i < m.y.size(); ++i) out.values[i] = detail::pearson_value(m, i);
  return out;
}

// sign(y - mu) [(1 - h) r_dev^2 + h r_pea^2]^{1/2}.
inline ResidualSet williams_residual(const FittedModel& m) {
  detail::require_converged(m, "williams_residual");
  ResidualSet out{ResidualKind::williams, {}, &m};
  out.values.resize(m.y.size());
  for (Eigen::Index i = 0; i < m.y.size(); ++i) {
    const double h = m.leverage[i];
    const double rd = detail::deviance_value(m, i);
    const double rp = detail::pearson_value(m, i);
    const double mag = std::sqrt((1.0 - h) * rd * rd + h * rp * rp);
    out.values[i] = (m.y[i] >= m.mu[i]) ? mag : -mag;
  }
  return out;
}

// (psi(y) - psi(mu)) / (sigma V(mu)^{1/2} psi'(mu) sqrt(1 - h)) with
// psi = 3 mu^{1/3} (gamma) or log mu (inverse Gaussian).
inline ResidualSet anscombe_residual_std(const FittedModel& m) {
  detail::require_converged(m, "anscombe_residual_std");
  ResidualSet out{ResidualKind::anscombe_std, {}, &m};
  out.values.resize(m.y.size());
  for (Eigen::Index i = 0; i < m.y.size(); ++i) out.values[i] = detail::anscombe_value(m, i);
  return out;
}

inline ResidualSet compute_residuals(const FittedModel& m, ResidualKind kind) {
  switch (kind) {
    case ResidualKind::quantile: return quantile_residual(m);
    case ResidualKind::adjusted_quantile: return adjusted_quantile_residual(m);
    case ResidualKind::deviance_std: return deviance_residual_std(m);
    case ResidualKind::pearson_std: return pearson_residual_std(m);
    case ResidualKind::williams: return williams_residual(m);
    case ResidualKind::anscombe_std: return anscombe_residual_std(m);
  }
  throw std::logic_error("compute_residuals: bad kind");
}

}  // namespace glmdiag
