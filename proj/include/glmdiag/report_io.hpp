#pragma once

#include <cstdio>
#include <ostream>
#include <string>

#include "glmdiag/diagnostics.hpp"
#include "glmdiag/simulation.hpp"

namespace glmdiag {

namespace detail {

inline std::string fixed3(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

}  // namespace detail

// Per-observation table in the reference layout: i, mu, then for each kind
// Mean / Variance / Skewness / Kurtosis / AD, with Mean and SD rows appended.
inline void write_scenario_report_tsv(const ScenarioReport& report, std::ostream& out) {
  out << "i\tmu";
  for (ResidualKind k : report.kinds) {
    const std::string n = residual_kind_name(k);
    out << '\t' << n << ":mean\t" << n << ":variance\t" << n << ":skewness\t" << n
        << ":kurtosis\t" << n << ":ad";
  }
  out << '\n';
  for (std::size_t i = 0; i < report.per_observation.size(); ++i) {
    const auto& obs = report.per_observation[i];
    out << (i + 1) << '\t' << detail::fixed3(obs.mu_true);
    for (const auto& rs : obs.by_kind) {
      out << '\t' << detail::fixed3(rs.moments.mean) << '\t' << detail::fixed3(rs.moments.variance)
          << '\t' << detail::fixed3(rs.moments.skewness) << '\t'
          << detail::fixed3(rs.moments.excess_kurtosis) << '\t' << detail::fixed3(rs.ad);
    }
    out << '\n';
  }
  for (const char* label : {"Mean", "SD"}) {
    out << label << "\t";
    for (std::size_t k = 0; k < report.kinds.size(); ++k) {
      const ReplicationSummary& rs =
          label[0] == 'M' ? report.summary_row[k].mean : report.summary_row[k].sd;
      out << '\t' << detail::fixed3(rs.moments.mean) << '\t' << detail::fixed3(rs.moments.variance)
          << '\t' << detail::fixed3(rs.moments.skewness) << '\t'
          << detail::fixed3(rs.moments.excess_kurtosis) << '\t' << detail::fixed3(rs.ad);
    }
    out << '\n';
  }
}

// AD comparison table per kind (mean, sd, min, quartiles, max), best first.
inline void write_comparison_tsv(const std::vector<ComparisonRow>& rows, std::ostream& out) {
  out << "residual\tmean\tsd\tmin\tq1\tq2\tq3\tmax\n";
  for (const auto& r : rows) {
    out << residual_kind_name(r.kind) << '\t' << detail::fixed3(r.mean_ad) << '\t'
        << detail::fixed3(r.sd_ad) << '\t' << detail::fixed3(r.min) << '\t' << detail::fixed3(r.q1)
        << '\t' << detail::fixed3(r.q2) << '\t' << detail::fixed3(r.q3) << '\t'
        << detail::fixed3(r.max) << '\n';
  }
}

// Envelope table: rank, expected position, band limits, observed value.
inline void write_envelope_tsv(const std::vector<EnvelopeBand>& bands, std::ostream& out) {
  out << "rank\texpected\tlower\tobserved\tupper\n";
  for (const auto& b : bands) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%zu\t%.6f\t%.6f\t%.6f\t%.6f\n", b.sorted_index,
                  b.expected_quantile, b.lower, b.observed, b.upper);
    out << buf;
  }
}

}  // namespace glmdiag
