#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "glmdiag/diagnostics.hpp"
#include "glmdiag/glm.hpp"
#include "glmdiag/parallel.hpp"
#include "glmdiag/residuals.hpp"
#include "glmdiag/rng.hpp"

namespace glmdiag {

struct CovariateGen {
  enum class Kind { intercept, uniform01, normal, gamma, invgauss };
  Kind kind = Kind::uniform01;
  double p1 = 0.0;  // mean (normal/gamma/invgauss)
  double p2 = 0.0;  // sd (normal) or dispersion (gamma/invgauss)

  static CovariateGen intercept() { return {Kind::intercept, 0.0, 0.0}; }
  static CovariateGen uniform01() { return {Kind::uniform01, 0.0, 0.0}; }
  static CovariateGen normal(double mean, double sd) { return {Kind::normal, mean, sd}; }
  static CovariateGen gamma(double mu, double sigma) { return {Kind::gamma, mu, sigma}; }
  static CovariateGen invgauss(double mu, double sigma) { return {Kind::invgauss, mu, sigma}; }

  double draw(RngStream& rs) const {
    switch (kind) {
      case Kind::intercept: return 1.0;
      case Kind::uniform01: return rs.uniform();
      case Kind::normal: return rs.normal(p1, p2);
      case Kind::gamma: return rs.gamma_variate(GammaParams(p1, p2));
      case Kind::invgauss: return rs.invgauss_variate(InvGaussParams(p1, p2));
    }
    throw std::logic_error("CovariateGen::draw: bad kind");
  }
};

// One simulation scenario: the covariates are realized once and reused across
// every replication.  When `fixed_design` is non-empty it IS that single
// realization (pinned so per-observation results are reproducible run to run);
// otherwise the design is drawn from `covariate_gens` on a reserved stream.
struct Scenario {
  std::string name;
  Family family = Family::gamma;
  LinkFunction link;
  Eigen::VectorXd beta;
  std::vector<CovariateGen> covariate_gens;
  double sigma = 0.1;
  std::size_t n = 15;
  std::size_t replications = 5000;
  std::uint64_t seed = 0;
  Eigen::MatrixXd fixed_design;  // n x k when pinned, 0 x 0 otherwise
};

// Per-observation distribution of one residual kind across replications.
struct ReplicationSummary {
  MomentSummary moments;
  double ad = 0.0;
};

struct ObservationSummary {
  double mu_true = 0.0;
  std::vector<ReplicationSummary> by_kind;  // parallel to ScenarioReport::kinds
};

struct KindSummaryRow {
  ReplicationSummary mean;  // across observations
  ReplicationSummary sd;
};

struct ScenarioReport {
  std::string scenario_name;
  std::vector<ResidualKind> kinds;
  Eigen::MatrixXd design;
  std::vector<ObservationSummary> per_observation;
  std::vector<KindSummaryRow> summary_row;  // parallel to kinds
  std::size_t replications = 0;
  std::size_t failures = 0;
};

namespace detail {

// The covariate realization must not move when the replication budget does,
// so it lives on a reserved stream id rather than on a replication stream.
inline constexpr std::uint64_t kCovariateStream = ~std::uint64_t{0};

inline Eigen::MatrixXd realize_design(const Scenario& s) {
  if (s.fixed_design.size() > 0) {
    if (static_cast<std::size_t>(s.fixed_design.rows()) != s.n) {
      throw std::domain_error("Scenario: fixed design has " +
                              std::to_string(s.fixed_design.rows()) + " rows but n = " +
                              std::to_string(s.n));
    }
    return s.fixed_design;
  }
  RngStream rs(s.seed, kCovariateStream);
  const std::size_t k = s.covariate_gens.size();
  Eigen::MatrixXd X(s.n, k);
  for (std::size_t j = 0; j < k; ++j) {
    for (std::size_t i = 0; i < s.n; ++i) {
      X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          s.covariate_gens[j].draw(rs);
    }
  }
  return X;
}

inline ReplicationSummary summarize(std::span<const double> values) {
  ReplicationSummary rs;
  rs.moments = moment_summary(values);
  rs.ad = anderson_darling(values);
  return rs;
}

}  // namespace detail

// Runs one scenario: covariates realized once, then for each replication a
// fresh response vector is drawn on stream (seed, r), the model is refit and
// every requested residual kind is recorded.  The per-observation summaries
// and the report are independent of thread count and execution order.
inline ScenarioReport run_scenario(const Scenario& s, const std::vector<ResidualKind>& kinds,
                                   int threads = 0) {
  if (kinds.empty()) {
    throw std::domain_error("run_scenario: no residual kinds requested");
  }
  if (s.beta.size() != static_cast<Eigen::Index>(s.covariate_gens.size()) &&
      s.fixed_design.size() == 0) {
    throw std::domain_error("run_scenario: beta length does not match covariate generators");
  }

  const Eigen::MatrixXd X = detail::realize_design(s);
  const std::size_t n = s.n;
  const std::size_t R = s.replications;
  if (X.cols() != s.beta.size()) {
    throw std::domain_error("run_scenario: beta length does not match design columns");
  }

  Eigen::VectorXd eta_true = X * s.beta;
  Eigen::VectorXd mu_true(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    if (!s.link.eta_admissible(eta_true[ii])) {
      throw std::domain_error("run_scenario: true linear predictor of observation " +
                              std::to_string(i + 1) + " is outside the " + s.link.name() +
                              " link domain");
    }
    mu_true[ii] = s.link.g_inv(eta_true[ii]);
  }

  const std::size_t nk = kinds.size();
  // values[kind][obs] holds one slot per replication; failed fits leave NaN.
  std::vector<std::vector<std::vector<double>>> values(
      nk, std::vector<std::vector<double>>(n, std::vector<double>(R)));
  std::vector<char> ok(R, 0);

  parallel_for(R, threads, [&](std::size_t r) {
    RngStream rs(s.seed, r);
    ModelSpec spec;
    spec.family = s.family;
    spec.link = s.link;
    spec.X = X;
    spec.y.resize(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
      const auto ii = static_cast<Eigen::Index>(i);
      spec.y[ii] = s.family == Family::gamma
                       ? rs.gamma_variate(GammaParams(mu_true[ii], s.sigma))
                       : rs.invgauss_variate(InvGaussParams(mu_true[ii], s.sigma));
    }
    try {
      const FittedModel m = fit(spec);
      for (std::size_t ki = 0; ki < nk; ++ki) {
        const ResidualSet res = compute_residuals(m, kinds[ki]);
        for (std::size_t i = 0; i < n; ++i) values[ki][i][r] = res.values[i];
      }
      ok[r] = 1;
    } catch (const std::exception&) {
      ok[r] = 0;
    }
  });

  std::size_t kept = 0;
  for (std::size_t r = 0; r < R; ++r) kept += ok[r];
  const std::size_t failures = R - kept;
  if (failures * 20 > R) {
    throw std::runtime_error("run_scenario: " + std::to_string(failures) + " of " +
                             std::to_string(R) + " replications failed to fit (> 5%)");
  }

  ScenarioReport report;
  report.scenario_name = s.name;
  report.kinds = kinds;
  report.design = X;
  report.replications = R;
  report.failures = failures;
  report.per_observation.resize(n);

  std::vector<double> col;
  col.reserve(kept);
  for (std::size_t i = 0; i < n; ++i) {
    ObservationSummary& obs = report.per_observation[i];
    obs.mu_true = mu_true[static_cast<Eigen::Index>(i)];
    obs.by_kind.resize(nk);
    for (std::size_t ki = 0; ki < nk; ++ki) {
      col.clear();
      for (std::size_t r = 0; r < R; ++r) {
        if (ok[r]) col.push_back(values[ki][i][r]);
      }
      obs.by_kind[ki] = detail::summarize(col);
    }
  }

  report.summary_row.resize(nk);
  for (std::size_t ki = 0; ki < nk; ++ki) {
    auto stat_summary = [&](auto getter) {
      double mean = 0.0;
      for (std::size_t i = 0; i < n; ++i) mean += getter(report.per_observation[i].by_kind[ki]);
      mean /= static_cast<double>(n);
      double ss = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double d = getter(report.per_observation[i].by_kind[ki]) - mean;
        ss += d * d;
      }
      const double sd = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1)) : 0.0;
      return std::pair<double, double>(mean, sd);
    };
    KindSummaryRow& row = report.summary_row[ki];
    auto [m_mean, s_mean] = stat_summary([](const ReplicationSummary& r) { return r.moments.mean; });
    auto [m_var, s_var] = stat_summary([](const ReplicationSummary& r) { return r.moments.variance; });
    auto [m_skew, s_skew] =
        stat_summary([](const ReplicationSummary& r) { return r.moments.skewness; });
    auto [m_kurt, s_kurt] =
        stat_summary([](const ReplicationSummary& r) { return r.moments.excess_kurtosis; });
    auto [m_ad, s_ad] = stat_summary([](const ReplicationSummary& r) { return r.ad; });
    row.mean.moments = {m_mean, m_var, m_skew, m_kurt, n};
    row.mean.ad = m_ad;
    row.sd.moments = {s_mean, s_var, s_skew, s_kurt, n};
    row.sd.ad = s_ad;
  }
  return report;
}

struct ComparisonRow {
  ResidualKind kind;
  double mean_ad = 0.0;
  double sd_ad = 0.0;
  double min = 0.0;
  double q1 = 0.0;
  double q2 = 0.0;
  double q3 = 0.0;
  double max = 0.0;
};

// Descriptive summary of the AD statistic per kind, ordered by mean AD
// ascending (best-approximated residual first).
inline std::vector<ComparisonRow> compare_report(const ScenarioReport& report) {
  const std::size_t nk = report.kinds.size();
  const std::size_t n = report.per_observation.size();
  std::vector<ComparisonRow> rows(nk);
  for (std::size_t ki = 0; ki < nk; ++ki) {
    std::vector<double> ad(n);
    for (std::size_t i = 0; i < n; ++i) ad[i] = report.per_observation[i].by_kind[ki].ad;
    std::sort(ad.begin(), ad.end());
    ComparisonRow& r = rows[ki];
    r.kind = report.kinds[ki];
    double mean = 0.0;
    for (double v : ad) mean += v;
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (double v : ad) ss += (v - mean) * (v - mean);
    r.mean_ad = mean;
    r.sd_ad = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1)) : 0.0;
    r.min = ad.front();
    r.q1 = detail::sorted_quantile(ad, 0.25);
    r.q2 = detail::sorted_quantile(ad, 0.5);
    r.q3 = detail::sorted_quantile(ad, 0.75);
    r.max = ad.back();
  }
  std::sort(rows.begin(), rows.end(),
            [](const ComparisonRow& a, const ComparisonRow& b) { return a.mean_ad < b.mean_ad; });
  return rows;
}

namespace detail {

// Reference design shared by scenarios I/II/III at n = 15: a single U(0,1)^2
// realization pinned so that per-observation results are stable across runs.
inline Eigen::MatrixXd reference_design_15() {
  static const double rows[15][2] = {
      {0.249115698785, 0.717474974037}, {0.426736115905, 0.754753281907},
      {0.890064656304, 0.593773148897}, {0.520486485327, 0.709033219379},
      {0.678735984756, 0.522545777823}, {0.803395825776, 0.694924931110},
      {0.084226743324, 0.353308244414}, {0.532897378080, 0.316994087958},
      {0.051592379324, 0.772837942539}, {0.360896998182, 0.230026478938},
      {0.185653625125, 0.514967085155}, {0.787998496443, 0.163730309492},
      {0.864029438067, 0.541195215379}, {0.556758444878, 0.528284120054},
      {0.769954614355, 0.802046961367}};
  Eigen::MatrixXd X(15, 3);
  for (int i = 0; i < 15; ++i) {
    X(i, 0) = 1.0;
    X(i, 1) = rows[i][0];
    X(i, 2) = rows[i][1];
  }
  return X;
}

inline Scenario make_builtin(std::string name, Family family, LinkKind link,
                             std::initializer_list<double> beta,
                             std::vector<CovariateGen> gens, double sigma, std::size_t n,
                             bool pin_design) {
  Scenario s;
  s.name = std::move(name);
  s.family = family;
  s.link = LinkFunction{link};
  s.beta.resize(static_cast<Eigen::Index>(beta.size()));
  Eigen::Index j = 0;
  for (double b : beta) s.beta[j++] = b;
  s.covariate_gens = std::move(gens);
  s.sigma = sigma;
  s.n = n;
  if (pin_design && n == 15) s.fixed_design = reference_design_15();
  return s;
}

}  // namespace detail

// The 14 built-in scenarios (seven per family).  Sample size is a parameter;
// the study sizes are 15 and 50.
inline std::vector<Scenario> builtin_scenarios(std::size_t n = 15) {
  using CG = CovariateGen;
  const std::vector<CG> unif = {CG::intercept(), CG::uniform01(), CG::uniform01()};
  const std::vector<CG> norm_ig = {CG::intercept(), CG::normal(0.5, 0.25), CG::invgauss(0.4, 2.0)};
  const std::vector<CG> norm_ga = {CG::intercept(), CG::normal(0.5, 0.25), CG::gamma(0.4, 1.0)};

  std::vector<Scenario> out;
  auto add = [&](std::string name, Family fam, LinkKind link, std::initializer_list<double> beta,
                 std::vector<CG> gens, double sigma, bool pin) {
    out.push_back(detail::make_builtin(std::move(name), fam, link, beta, std::move(gens), sigma,
                                       n, pin));
  };

  add("I-a", Family::gamma, LinkKind::log, {3.0, 2.0, 1.0}, unif, 0.10, true);
  add("II-a", Family::gamma, LinkKind::log, {3.0, 2.0, 1.0}, unif, 0.05, true);
  add("III-a", Family::gamma, LinkKind::log, {3.0, 2.0, 1.0}, unif, 0.50, true);
  add("IV-a", Family::gamma, LinkKind::log, {-3.0, 1.5, 1.0}, unif, 0.10, false);
  add("V-a", Family::gamma, LinkKind::log, {3.0, 2.0, 1.0}, norm_ig, 0.10, false);
  add("VI-a", Family::gamma, LinkKind::log, {3.0, 2.0, 1.0}, norm_ga, 0.10, false);
  add("VII-a", Family::gamma, LinkKind::inverse, {0.0025, 0.04, 0.01}, unif, 0.10, false);

  add("I-b", Family::inverse_gaussian, LinkKind::log, {3.0, 2.0, 1.0}, unif, 0.02, true);
  add("II-b", Family::inverse_gaussian, LinkKind::log, {3.0, 2.0, 1.0}, unif, 0.01, true);
  add("III-b", Family::inverse_gaussian, LinkKind::log, {3.0, 2.0, 1.0}, unif, 0.03, true);
  add("IV-b", Family::inverse_gaussian, LinkKind::log, {-3.0, 1.5, 1.0}, unif, 0.50, false);
  add("V-b", Family::inverse_gaussian, LinkKind::log, {3.0, 2.0, 1.0}, norm_ig, 0.02, false);
  add("VI-b", Family::inverse_gaussian, LinkKind::log, {3.0, 2.0, 1.0}, norm_ga, 0.02, false);
  add("VII-b", Family::inverse_gaussian, LinkKind::inverse_squared, {0.000006, 0.002, 0.001},
      unif, 0.02, false);
  return out;
}

inline Scenario builtin_scenario(std::string_view name, std::size_t n = 15) {
  for (Scenario& s : builtin_scenarios(n)) {
    if (s.name == name) return s;
  }
  throw std::invalid_argument("unknown built-in scenario: " + std::string(name));
}

}  // namespace glmdiag
