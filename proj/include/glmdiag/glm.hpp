#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "glmdiag/errors.hpp"
#include "glmdiag/link.hpp"
#include "glmdiag/special.hpp"

namespace glmdiag {

enum class Family { gamma, inverse_gaussian };

inline std::string family_name(Family f) {
  return f == Family::gamma ? "gamma" : "invgauss";
}

inline Family parse_family(std::string_view s) {
  if (s == "gamma") return Family::gamma;
  if (s == "invgauss" || s == "inverse_gaussian") return Family::inverse_gaussian;
  throw std::invalid_argument("unknown family: " + std::string(s));
}

// V(mu): mu^2 for gamma, mu^3 for inverse Gaussian.
inline double variance_function(Family f, double mu) {
  return f == Family::gamma ? mu * mu : mu * mu * mu;
}

// Unit deviance d_u(y, mu) with d_u = 0 iff y = mu.
// gamma: 2[-log(y/mu) + (y - mu)/mu]; inverse Gaussian: (y - mu)^2 / (mu^2 y).
inline double unit_deviance(Family f, double y, double mu) {
  if (f == Family::gamma) {
    return 2.0 * (-std::log(y / mu) + (y - mu) / mu);
  }
  const double d = y - mu;
  return d * d / (mu * mu * y);
}

// Exact log-likelihood in the mean/dispersion parameterization.
inline double family_loglik(Family f, const Eigen::VectorXd& y, const Eigen::VectorXd& mu,
                            double sigma) {
  const auto n = y.size();
  double ll = 0.0;
  if (f == Family::gamma) {
    const double a = 1.0 / (sigma * sigma);
    const double lga = log_gamma(a);
    for (Eigen::Index i = 0; i < n; ++i) {
      ll += a * std::log(a) - a * std::log(mu[i]) + (a - 1.0) * std::log(y[i]) -
            a * y[i] / mu[i] - lga;
    }
  } else {
    const double s2 = sigma * sigma;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double d = y[i] - mu[i];
      ll += -0.5 * std::log(2.0 * M_PI * s2 * y[i] * y[i] * y[i]) -
            d * d / (2.0 * mu[i] * mu[i] * s2 * y[i]);
    }
  }
  return ll;
}

struct ModelSpec {
  Family family = Family::gamma;
  LinkFunction link;
  Eigen::MatrixXd X;  // n x k, includes the intercept column when requested
  Eigen::VectorXd y;  // positive responses

  void validate() const {
    const auto n = X.rows();
    const auto k = X.cols();
    if (k < 1 || n <= k) {
      throw std::domain_error("ModelSpec: requires n > k >= 1, got n = " + std::to_string(n) +
                              ", k = " + std::to_string(k));
    }
    if (y.size() != n) {
      throw std::domain_error("ModelSpec: y length does not match design rows");
    }
    for (Eigen::Index i = 0; i < n; ++i) {
      if (!(y[i] > 0.0) || !std::isfinite(y[i])) {
        throw std::domain_error("ModelSpec: response must be positive and finite, observation " +
                                std::to_string(i + 1) + " is " + std::to_string(y[i]));
      }
    }
  }
};

struct FittedModel {
  Eigen::VectorXd beta;
  double sigma = 0.0;
  Eigen::VectorXd mu;
  Eigen::VectorXd eta;
  Eigen::VectorXd leverage;
  int iterations = 0;
  bool converged = false;
  double max_abs_score = 0.0;

  // Carried so residual computations are self-contained.
  Family family = Family::gamma;
  LinkFunction link;
  Eigen::VectorXd y;
};

// Tolerances somewhat below the classical 1e-10 so that one further IRLS step
// from the returned iterate moves the coefficients by well under 1e-8.
struct FitOptions {
  int max_iterations = 100;
  double tol_deviance = 1e-13;  // relative deviance change
  double tol_beta = 1e-11;      // max |delta beta|
};

// IRLS working weights w = (dmu/deta)^2 / V(mu).
inline Eigen::VectorXd working_weights(Family family, const LinkFunction& link,
                                       const Eigen::VectorXd& mu) {
  Eigen::VectorXd w(mu.size());
  for (Eigen::Index i = 0; i < mu.size(); ++i) {
    if (!(mu[i] > 0.0)) {
      throw std::domain_error("working_weights: mu must be positive, observation " +
                              std::to_string(i + 1));
    }
    const double d = link.dmu_deta(mu[i]);
    w[i] = d * d / variance_function(family, mu[i]);
  }
  return w;
}

namespace detail {

// Pinpoint the partner a dependent column is collinear with (largest |corr|;
// two constant columns count as perfectly collinear).
inline int collinear_partner(const Eigen::MatrixXd& X, int col) {
  double best = -1.0;
  int partner = -1;
  const Eigen::VectorXd c = X.col(col).array() - X.col(col).mean();
  const double nc = c.norm();
  const bool c_const = nc < 1e-12 * (1.0 + X.col(col).norm());
  for (int j = 0; j < X.cols(); ++j) {
    if (j == col) continue;
    const Eigen::VectorXd o = X.col(j).array() - X.col(j).mean();
    const double no = o.norm();
    const bool o_const = no < 1e-12 * (1.0 + X.col(j).norm());
    double corr;
    if (c_const || o_const) {
      corr = (c_const && o_const) ? 1.0 : 0.0;
    } else {
      corr = std::fabs(c.dot(o) / (nc * no));
    }
    if (corr > best) {
      best = corr;
      partner = j;
    }
  }
  return partner;
}

struct WlsSolve {
  Eigen::VectorXd beta;
  Eigen::VectorXd hat;  // diag of the weighted projection
};

// Weighted least squares through a column-pivoting QR of W^{1/2} X.  The thin
// Q factor gives the hat diagonal directly.
inline WlsSolve wls_qr(const Eigen::MatrixXd& X, const Eigen::VectorXd& w,
                       const Eigen::VectorXd& z) {
  const auto n = X.rows();
  const auto k = X.cols();
  const Eigen::VectorXd sw = w.cwiseSqrt();
  const Eigen::MatrixXd A = sw.asDiagonal() * X;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
  qr.setThreshold(1e-10);
  if (qr.rank() < k) {
    const int bad = qr.colsPermutation().indices()[k - 1];
    const int partner = collinear_partner(X, bad);
    throw SingularDesignError("design matrix is rank deficient: column " +
                                  std::to_string(bad + 1) + " is collinear with column " +
                                  std::to_string(partner + 1),
                              bad, partner);
  }
  WlsSolve out;
  out.beta = qr.solve((sw.array() * z.array()).matrix());
  const Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(n, k);
  out.hat.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) out.hat[i] = Q.row(i).squaredNorm();
  return out;
}

}  // namespace detail

// diag(H) with H = W^{1/2} X (X' W X)^{-1} X' W^{1/2}; entries in (0,1), sum k.
inline Eigen::VectorXd hat_diagonal(const Eigen::MatrixXd& X, const Eigen::VectorXd& w) {
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    if (!(w[i] > 0.0)) {
      throw std::domain_error("hat_diagonal: weights must be positive");
    }
  }
  return detail::wls_qr(X, w, Eigen::VectorXd::Zero(X.rows())).hat;
}

// Dispersion used in every standardized residual denominator: the Pearson
// statistic over the residual degrees of freedom,
//   sigma^2 = (1/(n-k)) sum (y_i - mu_i)^2 / V(mu_i).
// This is the estimator behind the reference simulation results; the strict
// ML estimate (estimate_sigma_ml) is biased low by roughly (n-k)/n at small n,
// which inflates every standardized residual by n/(n-k).
inline double estimate_sigma(Family family, const Eigen::VectorXd& y, const Eigen::VectorXd& mu,
                             int k) {
  const auto n = y.size();
  if (mu.size() != n || n == 0) {
    throw std::domain_error("estimate_sigma: y and mu must have equal positive length");
  }
  const double df = static_cast<double>(n) - static_cast<double>(k);
  if (!(df > 0.0)) {
    throw std::domain_error("estimate_sigma: no residual degrees of freedom");
  }
  double chi2 = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double d = y[i] - mu[i];
    chi2 += d * d / variance_function(family, mu[i]);
  }
  const double s2 = chi2 / df;
  if (!(s2 > 0.0)) {
    throw EstimationError("estimate_sigma: degenerate fit (all residuals zero)");
  }
  return std::sqrt(s2);
}

// Maximum-likelihood dispersion given fitted means.  Closed form for the
// inverse Gaussian; safeguarded Newton on the digamma score for the gamma
// shape.  This is the profile maximizer at beta-hat.
inline double estimate_sigma_ml(Family family, const Eigen::VectorXd& y,
                                const Eigen::VectorXd& mu) {
  const auto n = y.size();
  if (mu.size() != n || n == 0) {
    throw std::domain_error("estimate_sigma_ml: y and mu must have equal positive length");
  }

  if (family == Family::inverse_gaussian) {
    double s2 = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double d = y[i] - mu[i];
      s2 += d * d / (mu[i] * mu[i] * y[i]);
    }
    s2 /= static_cast<double>(n);
    if (!(s2 > 0.0)) {
      throw EstimationError("estimate_sigma_ml: degenerate fit (all residuals zero)");
    }
    return std::sqrt(s2);
  }

  // Gamma: solve log(a) - digamma(a) = D/(2n) for the shape a = 1/sigma^2.
  double dev = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) dev += unit_deviance(Family::gamma, y[i], mu[i]);
  const double c = dev / (2.0 * static_cast<double>(n));
  if (!(c > 0.0)) {
    throw EstimationError("estimate_sigma_ml: degenerate fit (zero deviance)");
  }

  double a = 0.5 / c;  // from log(a) - digamma(a) ~ 1/(2a)
  if (!(a > 0.0) || !std::isfinite(a)) a = 1.0;
  double lo = a, hi = a;
  auto score = [c](double s) { return std::log(s) - digamma(s) - c; };
  for (int i = 0; i < 400 && score(lo) < 0.0; ++i) lo *= 0.5;
  for (int i = 0; i < 400 && score(hi) > 0.0; ++i) hi *= 2.0;
  if (score(lo) < 0.0 || score(hi) > 0.0) {
    throw EstimationError("estimate_sigma: failed to bracket the gamma shape root (deviance/2n = " +
                          std::to_string(c) + ")");
  }
  a = std::min(std::max(a, lo), hi);
  for (int iter = 0; iter < 200; ++iter) {
    const double f = score(a);
    if (std::fabs(f) < 1e-14) break;
    if (f > 0.0) lo = a; else hi = a;
    const double fp = 1.0 / a - trigamma(a);  // negative everywhere
    double next = a - f / fp;
    if (!(next > lo && next < hi) || !std::isfinite(next)) next = 0.5 * (lo + hi);
    if (std::fabs(next - a) < 1e-13 * a) { a = next; break; }
    a = next;
  }
  return 1.0 / std::sqrt(a);
}

// Maximum-likelihood GLM fit by IRLS.  beta does not depend on the dispersion,
// so sigma is estimated once after convergence.
inline FittedModel fit(const ModelSpec& spec, const FitOptions& opt = {}) {
  spec.validate();
  const auto n = spec.X.rows();
  const auto k = spec.X.cols();
  const Eigen::VectorXd& y = spec.y;
  const LinkFunction link = spec.link;

  // mu(0) = y is positive by precondition and valid for all four links.
  Eigen::VectorXd mu = y;
  Eigen::VectorXd eta(n);
  for (Eigen::Index i = 0; i < n; ++i) eta[i] = link.g(mu[i]);
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(k);
  bool have_beta = false;

  double deviance = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) deviance += unit_deviance(spec.family, y[i], mu[i]);

  auto max_abs_score_at = [&](const Eigen::VectorXd& m) {
    Eigen::VectorXd sv(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      sv[i] = (y[i] - m[i]) * link.dmu_deta(m[i]) / variance_function(spec.family, m[i]);
    }
    return (spec.X.transpose() * sv).cwiseAbs().maxCoeff();
  };

  bool converged = false;
  int plateau = 0;
  int iter = 0;
  for (; iter < opt.max_iterations; ++iter) {
    const Eigen::VectorXd w = working_weights(spec.family, link, mu);
    Eigen::VectorXd z(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      z[i] = eta[i] + (y[i] - mu[i]) / link.dmu_deta(mu[i]);
    }
    Eigen::VectorXd beta_new = detail::wls_qr(spec.X, w, z).beta;

    // Step halving keeps mu positive under the non-log links.
    Eigen::VectorXd eta_new = spec.X * beta_new;
    Eigen::VectorXd mu_new(n);
    auto admissible = [&](const Eigen::VectorXd& e) {
      for (Eigen::Index i = 0; i < n; ++i) {
        if (!link.eta_admissible(e[i])) return false;
        const double m = link.g_inv(e[i]);
        if (!(m > 0.0) || !std::isfinite(m)) return false;
      }
      return true;
    };
    int halvings = 0;
    while (!admissible(eta_new) && halvings < 20 && have_beta) {
      beta_new = 0.5 * (beta_new + beta);
      eta_new = spec.X * beta_new;
      ++halvings;
    }
    if (!admissible(eta_new)) {
      throw NonConvergenceError(
          "fit: could not keep the mean positive under the " + link.name() + " link",
          std::vector<double>(beta.data(), beta.data() + k), iter);
    }
    for (Eigen::Index i = 0; i < n; ++i) mu_new[i] = link.g_inv(eta_new[i]);

    double deviance_new = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      deviance_new += unit_deviance(spec.family, y[i], mu_new[i]);
    }
    const double dbeta = have_beta ? (beta_new - beta).cwiseAbs().maxCoeff()
                                   : std::numeric_limits<double>::infinity();
    const double ddev = std::fabs(deviance_new - deviance) / (std::fabs(deviance_new) + 0.1);

    beta = beta_new;
    eta = eta_new;
    mu = mu_new;
    deviance = deviance_new;
    have_beta = true;
    if (ddev < opt.tol_deviance || dbeta < opt.tol_beta) {
      // non-canonical links approach the score root linearly, so keep
      // stepping on the plateau until the score equations are essentially
      // exact (with a stall guard for badly scaled data)
      ++plateau;
      if (max_abs_score_at(mu) < 1e-9 || plateau >= 8) {
        converged = true;
        ++iter;
        break;
      }
    } else {
      plateau = 0;
    }
  }
  if (!converged) {
    throw NonConvergenceError("fit: IRLS did not converge in " +
                                  std::to_string(opt.max_iterations) + " iterations",
                              std::vector<double>(beta.data(), beta.data() + k), iter);
  }

  FittedModel m;
  m.beta = beta;
  m.eta = eta;
  m.mu = mu;
  m.iterations = iter;
  m.converged = true;
  m.family = spec.family;
  m.link = link;
  m.y = y;

  // Final weights drive both the leverages and the score check.
  const Eigen::VectorXd w = working_weights(spec.family, link, mu);
  m.leverage = detail::wls_qr(spec.X, w, Eigen::VectorXd::Zero(n)).hat;
  m.max_abs_score = max_abs_score_at(mu);
  m.sigma = estimate_sigma(spec.family, y, mu, static_cast<int>(k));
  return m;
}

}  // namespace glmdiag
