// Command-line front end: fit gamma/inverse-Gaussian GLMs from CSV, emit
// residual tables and diagnostic plots, run simulation scenarios, and
// reproduce the reference simulation tables.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "glmdiag/csv.hpp"
#include "glmdiag/diagnostics.hpp"
#include "glmdiag/glm.hpp"
#include "glmdiag/report_io.hpp"
#include "glmdiag/reproduce.hpp"
#include "glmdiag/residuals.hpp"
#include "glmdiag/simulation.hpp"
#include "glmdiag/svg.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace glmdiag;

namespace {

// All output files are staged under temporary names and renamed together, so
// a failing run leaves no partial tables behind.
class OutputStager {
 public:
  explicit OutputStager(fs::path dir) : dir_(std::move(dir)) {
    fs::create_directories(dir_);
  }
  OutputStager(const OutputStager&) = delete;
  ~OutputStager() {
    for (const auto& [tmp, final] : staged_) {
      std::error_code ec;
      fs::remove(tmp, ec);
    }
  }

  void put(const std::string& name, const std::string& content) {
    const fs::path tmp = dir_ / (".tmp." + name);
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write to output directory: " + dir_.string());
    out << content;
    out.close();
    staged_.emplace_back(tmp, dir_ / name);
  }

  void commit() {
    for (const auto& [tmp, final] : staged_) fs::rename(tmp, final);
    staged_.clear();
  }

 private:
  fs::path dir_;
  std::vector<std::pair<fs::path, fs::path>> staged_;
};

struct CommonArgs {
  std::string data;
  std::string family = "gamma";
  std::string link = "log";
  std::string response;
  std::vector<std::string> covariates;
  bool no_intercept = false;
  std::vector<std::string> kinds;
  std::uint64_t seed = 0;
  std::size_t reps = 5000;
  std::size_t nsim_envelope = 100;
  double band = 0.95;
  std::string out = ".";
  int threads = 0;
};

int effective_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("GLMDIAG_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return 0;  // library default: all cores
}

std::vector<ResidualKind> parse_kinds(const std::vector<std::string>& names) {
  if (names.empty()) {
    return {std::begin(kAllResidualKinds), std::end(kAllResidualKinds)};
  }
  std::vector<ResidualKind> out;
  for (const std::string& n : names) out.push_back(parse_residual_kind(n));
  return out;
}

ModelSpec build_spec(const CommonArgs& args) {
  if (args.data.empty()) throw std::invalid_argument("--data is required");
  if (args.response.empty()) throw std::invalid_argument("--response is required");
  const CsvTable table = read_csv(args.data);

  auto need_column = [&](const std::string& name) {
    const int j = table.column_index(name);
    if (j < 0) throw CsvError("column '" + name + "' not found in " + args.data, 1);
    return static_cast<std::size_t>(j);
  };

  const std::size_t yi = need_column(args.response);
  std::vector<std::size_t> xcols;
  for (const std::string& c : args.covariates) xcols.push_back(need_column(c));

  const std::size_t n = table.rows.size();
  const std::size_t k = xcols.size() + (args.no_intercept ? 0 : 1);
  if (k == 0) throw std::invalid_argument("no covariates and no intercept: nothing to fit");

  ModelSpec spec;
  spec.family = parse_family(args.family);
  spec.link = LinkFunction::parse(args.link);
  spec.X.resize(n, k);
  spec.y.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t j = 0;
    if (!args.no_intercept) spec.X(i, j++) = 1.0;
    for (std::size_t c : xcols) spec.X(i, j++) = table.rows[i][c];
    spec.y[i] = table.rows[i][yi];
  }
  return spec;
}

std::vector<std::string> design_names(const CommonArgs& args) {
  std::vector<std::string> names;
  if (!args.no_intercept) names.push_back("(intercept)");
  for (const std::string& c : args.covariates) names.push_back(c);
  return names;
}

std::string fmt(double v, int digits = 6) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

json fit_to_json(const FittedModel& m, const std::vector<std::string>& names) {
  json coef = json::object();
  for (Eigen::Index j = 0; j < m.beta.size(); ++j) {
    coef[names[static_cast<std::size_t>(j)]] = m.beta[j];
  }
  json obs = json::array();
  for (Eigen::Index i = 0; i < m.mu.size(); ++i) {
    obs.push_back({{"y", m.y[i]}, {"mu", m.mu[i]}, {"eta", m.eta[i]}, {"leverage", m.leverage[i]}});
  }
  return json{{"family", family_name(m.family)},
              {"link", m.link.name()},
              {"coefficients", coef},
              {"sigma", m.sigma},
              {"iterations", m.iterations},
              {"converged", m.converged},
              {"max_abs_score", m.max_abs_score},
              {"observations", obs}};
}

std::string fit_to_tsv(const FittedModel& m, const std::vector<std::string>& names) {
  std::ostringstream out;
  out << "family\t" << family_name(m.family) << "\nlink\t" << m.link.name() << "\nsigma\t"
      << fmt(m.sigma) << "\niterations\t" << m.iterations << "\nconverged\t"
      << (m.converged ? "yes" : "no") << "\nmax_abs_score\t" << fmt(m.max_abs_score, 12) << "\n\n";
  out << "coefficient\testimate\n";
  for (Eigen::Index j = 0; j < m.beta.size(); ++j) {
    out << names[static_cast<std::size_t>(j)] << '\t' << fmt(m.beta[j]) << '\n';
  }
  out << "\ni\ty\tmu\teta\tleverage\n";
  for (Eigen::Index i = 0; i < m.mu.size(); ++i) {
    out << (i + 1) << '\t' << fmt(m.y[i]) << '\t' << fmt(m.mu[i]) << '\t' << fmt(m.eta[i]) << '\t'
        << fmt(m.leverage[i]) << '\n';
  }
  return out.str();
}

int run_fit(const CommonArgs& args) {
  const ModelSpec spec = build_spec(args);
  const FittedModel m = fit(spec);
  const auto names = design_names(args);
  OutputStager stage(args.out);
  stage.put("fit.tsv", fit_to_tsv(m, names));
  stage.put("fit.json", fit_to_json(m, names).dump(2) + "\n");
  stage.commit();
  return 0;
}

int run_residuals(const CommonArgs& args) {
  const ModelSpec spec = build_spec(args);
  const FittedModel m = fit(spec);
  const auto kinds = parse_kinds(args.kinds);

  std::vector<ResidualSet> sets;
  for (ResidualKind k : kinds) sets.push_back(compute_residuals(m, k));

  std::ostringstream tsv;
  tsv << "i\ty\tmu\teta\tleverage";
  for (ResidualKind k : kinds) tsv << '\t' << residual_kind_name(k);
  tsv << '\n';
  for (Eigen::Index i = 0; i < m.y.size(); ++i) {
    tsv << (i + 1) << '\t' << fmt(m.y[i]) << '\t' << fmt(m.mu[i]) << '\t' << fmt(m.eta[i]) << '\t'
        << fmt(m.leverage[i]);
    for (const auto& s : sets) tsv << '\t' << fmt(s.values[static_cast<std::size_t>(i)]);
    tsv << '\n';
  }

  json jres = fit_to_json(m, design_names(args));
  for (const auto& s : sets) jres["residuals"][residual_kind_name(s.kind)] = s.values;

  OutputStager stage(args.out);
  stage.put("residuals.tsv", tsv.str());
  stage.put("residuals.json", jres.dump(2) + "\n");
  for (const auto& s : sets) {
    SvgPlot plot;
    plot.title = residual_kind_name(s.kind) + std::string(" residual vs linear predictor");
    plot.xlabel = "linear predictor";
    plot.ylabel = residual_kind_name(s.kind) + std::string(" residual");
    for (Eigen::Index i = 0; i < m.eta.size(); ++i) {
      plot.points.push_back({m.eta[i], s.values[static_cast<std::size_t>(i)]});
    }
    const double lo = m.eta.minCoeff(), hi = m.eta.maxCoeff();
    plot.line = {{lo, 0.0}, {hi, 0.0}};
    stage.put("resid_vs_eta_" + residual_kind_name(s.kind) + ".svg", render_svg(plot));
  }
  stage.commit();
  return 0;
}

int run_envelope(const CommonArgs& args) {
  const ModelSpec spec = build_spec(args);
  const FittedModel m = fit(spec);
  const auto kinds = parse_kinds(args.kinds);
  const int threads = effective_threads(args.threads);

  OutputStager stage(args.out);
  for (ResidualKind k : kinds) {
    for (EnvelopeStyle style : {EnvelopeStyle::normal_plot, EnvelopeStyle::half_normal}) {
      const bool half = style == EnvelopeStyle::half_normal;
      const auto bands = simulated_envelope(spec, m, k, args.nsim_envelope, args.band,
                                            RngStream(args.seed, 0), style, threads);
      std::ostringstream tsv;
      write_envelope_tsv(bands, tsv);
      const std::string base =
          std::string(half ? "envelope_half_" : "envelope_") + residual_kind_name(k);
      stage.put(base + ".tsv", tsv.str());

      SvgPlot plot;
      plot.title = residual_kind_name(k) +
                   std::string(half ? " residual, half-normal plot" : " residual, normal plot");
      plot.xlabel = half ? "half-normal order statistic" : "normal order statistic";
      plot.ylabel = half ? "|residual| (sorted)" : "residual (sorted)";
      for (const auto& b : bands) {
        plot.points.push_back({b.expected_quantile, b.observed});
        plot.bands.push_back({b.expected_quantile, b.lower, b.upper});
      }
      stage.put(base + ".svg", render_svg(plot));
    }
  }
  stage.commit();
  return 0;
}

Scenario scenario_from_json(const json& j) {
  if (j.contains("builtin")) {
    Scenario s = builtin_scenario(j.at("builtin").get<std::string>(),
                                  j.value("n", std::size_t{15}));
    if (j.contains("replications")) s.replications = j.at("replications").get<std::size_t>();
    if (j.contains("seed")) s.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("sigma")) s.sigma = j.at("sigma").get<double>();
    return s;
  }
  Scenario s;
  s.name = j.at("name").get<std::string>();
  s.family = parse_family(j.at("family").get<std::string>());
  s.link = LinkFunction::parse(j.at("link").get<std::string>());
  const auto beta = j.at("beta").get<std::vector<double>>();
  s.beta = Eigen::Map<const Eigen::VectorXd>(beta.data(), static_cast<Eigen::Index>(beta.size()));
  for (const json& c : j.at("covariates")) {
    const std::string kind = c.at("kind").get<std::string>();
    if (kind == "intercept") {
      s.covariate_gens.push_back(CovariateGen::intercept());
    } else if (kind == "uniform") {
      s.covariate_gens.push_back(CovariateGen::uniform01());
    } else if (kind == "normal") {
      s.covariate_gens.push_back(CovariateGen::normal(c.at("mean"), c.at("sd")));
    } else if (kind == "gamma") {
      s.covariate_gens.push_back(CovariateGen::gamma(c.at("mu"), c.at("sigma")));
    } else if (kind == "invgauss") {
      s.covariate_gens.push_back(CovariateGen::invgauss(c.at("mu"), c.at("sigma")));
    } else {
      throw std::invalid_argument("unknown covariate kind: " + kind);
    }
  }
  s.sigma = j.at("sigma").get<double>();
  s.n = j.at("n").get<std::size_t>();
  s.replications = j.value("replications", std::size_t{5000});
  s.seed = j.value("seed", std::uint64_t{0});
  return s;
}

json report_to_json(const ScenarioReport& rep) {
  json kinds = json::array();
  for (ResidualKind k : rep.kinds) kinds.push_back(residual_kind_name(k));
  json obs = json::array();
  for (const auto& o : rep.per_observation) {
    json by_kind = json::array();
    for (const auto& rs : o.by_kind) {
      by_kind.push_back({{"mean", rs.moments.mean},
                         {"variance", rs.moments.variance},
                         {"skewness", rs.moments.skewness},
                         {"kurtosis", rs.moments.excess_kurtosis},
                         {"ad", rs.ad}});
    }
    obs.push_back({{"mu", o.mu_true}, {"by_kind", by_kind}});
  }
  return json{{"scenario", rep.scenario_name},
              {"kinds", kinds},
              {"replications", rep.replications},
              {"failures", rep.failures},
              {"per_observation", obs}};
}

int run_simulate(const CommonArgs& args) {
  if (args.data.empty()) {
    throw std::invalid_argument("--data must point to a scenario configuration (JSON)");
  }
  std::ifstream in(args.data);
  if (!in) throw CsvError("cannot open scenario configuration: " + args.data, 0);
  json config;
  try {
    in >> config;
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("bad scenario configuration " + args.data + ": " + e.what());
  }
  const auto kinds = parse_kinds(args.kinds);
  const int threads = effective_threads(args.threads);

  OutputStager stage(args.out);
  for (const json& sj : config.at("scenarios")) {
    Scenario s = scenario_from_json(sj);
    if (!sj.contains("seed")) s.seed = args.seed;
    if (!sj.contains("replications")) s.replications = args.reps;
    const ScenarioReport rep = run_scenario(s, kinds, threads);

    const std::string base = "sim_" + s.name + "_n" + std::to_string(s.n);
    std::ostringstream tsv;
    write_scenario_report_tsv(rep, tsv);
    stage.put(base + ".tsv", tsv.str());
    std::ostringstream cmp;
    write_comparison_tsv(compare_report(rep), cmp);
    stage.put(base + "_compare.tsv", cmp.str());
    stage.put(base + ".json", report_to_json(rep).dump(2) + "\n");
  }
  stage.commit();
  return 0;
}

int run_reproduce(const std::string& table_id, const CommonArgs& args) {
  const ReproduceResult result =
      reproduce_table(table_id, args.reps, args.seed, effective_threads(args.threads));

  std::ostringstream tsv;
  for (const auto& block : result.blocks) {
    tsv << "# scenario " << block.scenario << " n=" << block.n << "\n";
    write_scenario_report_tsv(block.report, tsv);
    if (!block.comparison.empty()) {
      tsv << "\n# AD comparison, best first\n";
      write_comparison_tsv(block.comparison, tsv);
    }
    tsv << '\n';
  }

  std::ostringstream checks;
  checks << "scenario\tn\tresidual\tstat\treference\tobserved\ttolerance\tflag\n";
  std::size_t passed = 0;
  for (const auto& c : result.checks) {
    checks << c.scenario << '\t' << c.n << '\t' << residual_kind_name(c.kind) << '\t' << c.stat
           << '\t' << fmt(c.reference, 3) << '\t' << fmt(c.observed, 3) << '\t'
           << fmt(c.tolerance, 3) << '\t'
           << (result.informational ? "low-replication, informational"
                                    : (c.pass ? "pass" : "FAIL"))
           << '\n';
    passed += c.pass;
  }

  json jout{{"table", result.table_id},
            {"replications", args.reps},
            {"informational", result.informational},
            {"checks_passed", passed},
            {"checks_total", result.checks.size()}};

  OutputStager stage(args.out);
  stage.put("table_" + result.table_id + ".tsv", tsv.str());
  stage.put("table_" + result.table_id + "_checks.tsv", checks.str());
  stage.put("table_" + result.table_id + ".json", jout.dump(2) + "\n");
  stage.commit();

  std::cout << result.table_id << ": " << passed << "/" << result.checks.size()
            << " reference checks within tolerance"
            << (result.informational ? " (low-replication run, informational only)" : "") << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Residual diagnostics for gamma and inverse Gaussian GLMs"};
  app.require_subcommand(1);

  CommonArgs args;
  std::string table_id;

  auto add_data_options = [&](CLI::App* cmd) {
    cmd->add_option("--data", args.data, "input CSV (header row, numeric columns)");
    cmd->add_option("--family", args.family, "response family: gamma | invgauss")
        ->check(CLI::IsMember({"gamma", "invgauss"}));
    cmd->add_option("--link", args.link, "link function: log | inverse | inverse2 | identity")
        ->check(CLI::IsMember({"log", "inverse", "inverse2", "identity"}));
    cmd->add_option("--response", args.response, "response column name");
    cmd->add_option("--covariates", args.covariates, "comma-separated covariate column names")
        ->delimiter(',');
    cmd->add_flag("--no-intercept", args.no_intercept, "omit the intercept column");
  };
  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--kinds", args.kinds,
                    "residual kinds (quantile, adjusted_quantile, deviance, pearson, williams, "
                    "anscombe); default: all")
        ->delimiter(',');
    cmd->add_option("--seed", args.seed, "random seed (default 0)");
    cmd->add_option("--reps", args.reps, "Monte Carlo replications (default 5000)");
    cmd->add_option("--nsim-envelope", args.nsim_envelope, "envelope replicates (default 100)");
    cmd->add_option("--band", args.band, "envelope band level (default 0.95)");
    cmd->add_option("--out", args.out, "output directory (default .)");
    cmd->add_option("--threads", args.threads,
                    "worker threads (default: GLMDIAG_THREADS or all cores)");
  };

  CLI::App* cmd_fit = app.add_subcommand("fit", "fit a GLM from CSV data");
  add_data_options(cmd_fit);
  add_common(cmd_fit);
  CLI::App* cmd_res = app.add_subcommand("residuals", "fit and tabulate residuals with plots");
  add_data_options(cmd_res);
  add_common(cmd_res);
  CLI::App* cmd_env =
      app.add_subcommand("envelope", "normal and half-normal plots with simulated envelope");
  add_data_options(cmd_env);
  add_common(cmd_env);
  CLI::App* cmd_sim = app.add_subcommand("simulate", "run scenarios from a JSON configuration");
  add_data_options(cmd_sim);
  add_common(cmd_sim);
  CLI::App* cmd_rep = app.add_subcommand("reproduce", "re-run a reference simulation table");
  cmd_rep->add_option("table", table_id, "table id: T1 | T2 | T5 | T6 | T7 | T8")->required();
  add_common(cmd_rep);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (cmd_fit->parsed()) return run_fit(args);
    if (cmd_res->parsed()) return run_residuals(args);
    if (cmd_env->parsed()) return run_envelope(args);
    if (cmd_sim->parsed()) return run_simulate(args);
    if (cmd_rep->parsed()) return run_reproduce(table_id, args);
  } catch (const CsvError& e) {
    std::cerr << "error (line " << e.line << "): " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const SingularDesignError& e) {
    std::cerr << "fit error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "fit error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
