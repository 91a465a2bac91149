#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <iostream>
#include <span>
#include <stdexcept>
#include <vector>

#include "glmdiag/distributions.hpp"
#include "glmdiag/errors.hpp"
#include "glmdiag/glm.hpp"
#include "glmdiag/parallel.hpp"
#include "glmdiag/residuals.hpp"
#include "glmdiag/rng.hpp"

namespace glmdiag {

struct MomentSummary {
  double mean = 0.0;
  double variance = 0.0;         // unbiased
  double skewness = 0.0;         // m3 / m2^{3/2}
  double excess_kurtosis = 0.0;  // m4 / m2^2 - 3
  std::size_t n = 0;
};

inline MomentSummary moment_summary(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n < 4) {
    throw std::domain_error("moment_summary: need at least 4 values, got " + std::to_string(n));
  }
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(n);
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double v : values) {
    const double d = v - mean;
    const double d2 = d * d;
    m2 += d2;
    m3 += d2 * d;
    m4 += d2 * d2;
  }
  m2 /= static_cast<double>(n);
  m3 /= static_cast<double>(n);
  m4 /= static_cast<double>(n);
  if (!(m2 > 0.0)) {
    throw std::domain_error("moment_summary: degenerate sample (zero variance)");
  }
  MomentSummary s;
  s.n = n;
  s.mean = mean;
  s.variance = m2 * static_cast<double>(n) / static_cast<double>(n - 1);
  s.skewness = m3 / std::pow(m2, 1.5);
  s.excess_kurtosis = m4 / (m2 * m2) - 3.0;
  return s;
}

// Anderson-Darling statistic against the fixed standard normal (simple
// hypothesis, no parameter estimation):
//   A^2 = -n - (1/n) sum (2i-1) [log Phi(z_(i)) + log(1 - Phi(z_(n+1-i)))].
inline double anderson_darling(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n == 0) {
    throw std::domain_error("anderson_darling: empty sample");
  }
  std::vector<double> z(values.begin(), values.end());
  for (double v : z) {
    if (!std::isfinite(v)) {
      throw std::domain_error("anderson_darling: non-finite value in sample");
    }
  }
  std::sort(z.begin(), z.end());
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = static_cast<double>(2 * i + 1);
    sum += w * (normal_logcdf(z[i]) + normal_logcdf(-z[n - 1 - i]));
  }
  return -static_cast<double>(n) - sum / static_cast<double>(n);
}

enum class EnvelopeStyle { normal_plot, half_normal };

struct EnvelopeBand {
  std::size_t sorted_index = 0;   // 1..n
  double lower = 0.0;
  double upper = 0.0;
  double observed = 0.0;
  double expected_quantile = 0.0;  // normal (or half-normal) order-statistic position
};

namespace detail {

// Type-7 empirical quantile on an already sorted vector.
inline double sorted_quantile(const std::vector<double>& sorted, double p) {
  const std::size_t n = sorted.size();
  if (n == 1) return sorted[0];
  const double pos = p * static_cast<double>(n - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, n - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

}  // namespace detail

// Atkinson-style simulated envelope: draw n_sim response vectors from the
// fitted model, refit the same design to each, and band the sorted residuals
// rank by rank with empirical percentile limits.
inline std::vector<EnvelopeBand> simulated_envelope(const ModelSpec& spec,
                                                    const FittedModel& fitted, ResidualKind kind,
                                                    std::size_t n_sim, double band,
                                                    RngStream stream,
                                                    EnvelopeStyle style = EnvelopeStyle::normal_plot,
                                                    int threads = 1) {
  if (!fitted.converged) {
    throw std::invalid_argument("simulated_envelope: model has not converged");
  }
  if (n_sim < 19) {
    throw std::domain_error("simulated_envelope: n_sim must be at least 19");
  }
  if (!(band > 0.0 && band < 1.0)) {
    throw std::domain_error("simulated_envelope: band must lie in (0,1)");
  }
  const std::size_t n = static_cast<std::size_t>(spec.y.size());
  const bool half = style == EnvelopeStyle::half_normal;

  std::vector<std::vector<double>> replicate(n_sim);
  std::vector<char> ok(n_sim, 0);
  parallel_for(n_sim, threads, [&](std::size_t r) {
    RngStream rs = stream.substream(r);
    ModelSpec sim = spec;
    for (std::size_t i = 0; i < n; ++i) {
      sim.y[static_cast<Eigen::Index>(i)] =
          spec.family == Family::gamma
              ? rs.gamma_variate(GammaParams(fitted.mu[static_cast<Eigen::Index>(i)], fitted.sigma))
              : rs.invgauss_variate(
                    InvGaussParams(fitted.mu[static_cast<Eigen::Index>(i)], fitted.sigma));
    }
    try {
      const FittedModel refit = fit(sim);
      std::vector<double> vals = compute_residuals(refit, kind).values;
      if (half) {
        for (double& v : vals) v = std::fabs(v);
      }
      std::sort(vals.begin(), vals.end());
      replicate[r] = std::move(vals);
      ok[r] = 1;
    } catch (const std::exception&) {
      ok[r] = 0;
    }
  });

  std::size_t kept = 0;
  for (std::size_t r = 0; r < n_sim; ++r) kept += ok[r];
  if (kept < n_sim) {
    std::cerr << "simulated_envelope: dropped " << (n_sim - kept) << " of " << n_sim
              << " replicates (refit failed)\n";
  }
  if (kept * 5 < n_sim * 4) {
    throw EnvelopeError("simulated_envelope: more than 20% of replicate refits failed (" +
                        std::to_string(n_sim - kept) + " of " + std::to_string(n_sim) + ")");
  }

  std::vector<double> observed = compute_residuals(fitted, kind).values;
  if (half) {
    for (double& v : observed) v = std::fabs(v);
  }
  std::sort(observed.begin(), observed.end());

  const double lo_p = (1.0 - band) / 2.0;
  const double hi_p = (1.0 + band) / 2.0;
  std::vector<EnvelopeBand> out(n);
  std::vector<double> column;
  column.reserve(kept);
  for (std::size_t i = 0; i < n; ++i) {
    column.clear();
    for (std::size_t r = 0; r < n_sim; ++r) {
      if (ok[r]) column.push_back(replicate[r][i]);
    }
    std::sort(column.begin(), column.end());
    EnvelopeBand b;
    b.sorted_index = i + 1;
    b.lower = detail::sorted_quantile(column, lo_p);
    b.upper = detail::sorted_quantile(column, hi_p);
    b.observed = observed[i];
    const double di = static_cast<double>(i + 1);
    const double dn = static_cast<double>(n);
    b.expected_quantile = half ? normal_quantile((dn + di - 0.125) / (2.0 * dn + 0.5))
                               : normal_quantile((di - 0.375) / (dn + 0.25));
    out[i] = b;
  }
  return out;
}

}  // namespace glmdiag
