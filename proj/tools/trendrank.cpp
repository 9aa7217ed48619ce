// trendrank - command line front end.
//
// Subcommands:
//   estimate   read a CSV panel, estimate the number of common trends
//   trends     extract common trends and loadings by principal components
//   simulate   generate a VAR(1) panel with a chosen number of trends
//   mc         run a Monte Carlo experiment grid from a config file
//   hill       tail-index diagnostics per series
//
// All outputs are deterministic functions of (input bytes, flags, seed).
// Errors print a single machine-parseable line "ERROR <code> <message>" on
// stderr and exit with 2 (input error) or 3 (numerical error).

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include <nlohmann/json.hpp>

#include "trendrank/csv.hpp"
#include "trendrank/diagnostics.hpp"
#include "trendrank/errors.hpp"
#include "trendrank/harness.hpp"
#include "trendrank/preprocess.hpp"
#include "trendrank/rank.hpp"
#include "trendrank/rtest.hpp"
#include "trendrank/simulate.hpp"
#include "trendrank/spectra.hpp"
#include "trendrank/trends.hpp"

namespace {

using nlohmann::json;
using namespace trendrank;

struct TransformFlags {
  bool log = false;
  bool demean = false;
  bool detrend = false;
  bool initial = false;

  std::vector<std::string> names() const {
    std::vector<std::string> out;
    if (log) out.push_back("log");
    if (demean) out.push_back("demean");
    if (detrend) out.push_back("detrend");
    if (initial) out.push_back("initial");
    return out;
  }
};

struct TestFlags {
  double kappa = 1e-4;
  int m_draws = 100;
  std::string quadrature = "gh2";
  int s_reps = 1;
  std::string schedule = "over-t";
  double alpha_base = 0.05;
  double ridge = 0.0;
  std::uint64_t seed = 0;

  RandTestConfig test_config() const {
    RandTestConfig config;
    config.kappa = kappa;
    config.m_draws = m_draws;
    config.quadrature = parse_quadrature(quadrature);
    config.s_reps = s_reps;
    config.seed = seed;
    return config;
  }

  LevelSchedule level_schedule() const {
    return LevelSchedule{schedule_from_name(schedule), alpha_base};
  }
};

void add_transform_flags(CLI::App* cmd, TransformFlags& flags) {
  cmd->add_flag("--log", flags.log, "take entrywise natural logs first");
  cmd->add_flag("--demean", flags.demean, "subtract per-series means");
  cmd->add_flag("--detrend", flags.detrend,
                "subtract per-series linear time fits");
  cmd->add_flag("--initial", flags.initial,
                "subtract each series' first observation");
}

void add_test_flags(CLI::App* cmd, TestFlags& flags, bool seed_required) {
  cmd->add_option("--kappa", flags.kappa, "eigenvalue damping exponent")
      ->capture_default_str();
  cmd->add_option("--m-draws", flags.m_draws, "artificial sample size M")
      ->capture_default_str();
  cmd->add_option("--quadrature", flags.quadrature,
                  "gh2 | gh4 | grid:u:w[:u:w...]")
      ->capture_default_str();
  cmd->add_option("--s-reps", flags.s_reps,
                  "strong-rule repetitions (1 = single shot)")
      ->capture_default_str();
  cmd->add_option("--schedule", flags.schedule,
                  "per-test level: over-t | over-log-t | over-n | fixed")
      ->capture_default_str();
  cmd->add_option("--alpha-base", flags.alpha_base, "schedule base level")
      ->capture_default_str();
  cmd->add_option("--ridge", flags.ridge,
                  "ridge added to the difference moment (default 0)")
      ->capture_default_str();
  auto* seed = cmd->add_option("--seed", flags.seed, "root seed");
  if (seed_required) {
    seed->required();
  } else {
    seed->capture_default_str();
  }
}

TimeSeriesPanel read_input(const std::string& path) {
  if (path == "-") return read_panel_csv(std::cin);
  return read_panel_csv_file(path);
}

TimeSeriesPanel apply_transforms(TimeSeriesPanel panel,
                                 const TransformFlags& flags) {
  if (flags.log) panel = log_transform(panel);
  if (flags.demean) panel = demean(panel);
  if (flags.detrend) panel = detrend(panel);
  if (flags.initial) panel = deviations_from_initial(panel);
  return panel;
}

void write_output(const std::string& path, const std::string& bytes) {
  if (path == "-") {
    std::cout << bytes;
    return;
  }
  std::ofstream out(path);
  if (!out.is_open()) {
    throw input_error("ParseError", "cannot open '" + path + "' for writing");
  }
  out << bytes;
}

json config_echo(const std::string& command, const std::string& input,
                 const TransformFlags& transforms, const TestFlags& flags) {
  json echo;
  echo["command"] = command;
  echo["input"] = input;
  echo["transforms"] = transforms.names();
  echo["kappa"] = flags.kappa;
  echo["m_draws"] = flags.m_draws;
  echo["quadrature"] = flags.quadrature;
  echo["s_reps"] = flags.s_reps;
  echo["schedule"] = flags.schedule;
  echo["alpha_base"] = flags.alpha_base;
  echo["ridge"] = flags.ridge;
  echo["seed"] = flags.seed;
  return echo;
}

json spectrum_json(const EigenSpectrum& spectrum) {
  json out;
  out["lambdas"] = spectrum.lambdas;
  out["cond_s00"] = spectrum.cond_s00;
  return out;
}

json trail_json(const RankEstimate& estimate) {
  json trail = json::array();
  for (const auto& step : estimate.trail) {
    json item;
    item["j"] = step.j;
    item["stat"] = step.statistic;
    item["crit"] = step.critical;
    item["reject"] = step.reject;
    trail.push_back(std::move(item));
  }
  return trail;
}

int run_estimate(const std::string& input, const std::string& output,
                 const TransformFlags& transforms, const TestFlags& flags,
                 const std::string& algorithm) {
  const TimeSeriesPanel panel = apply_transforms(read_input(input), transforms);
  const MomentPair mp = moment_matrices(panel);
  const EigenSpectrum spectrum = relative_spectrum(mp, flags.ridge);
  const RankEstimate estimate = estimate_rank(
      algorithm_from_name(algorithm), spectrum,
      static_cast<double>(panel.t()), flags.test_config(),
      flags.level_schedule());

  json out;
  out["config"] = config_echo("estimate", input, transforms, flags);
  out["config"]["algorithm"] = algorithm;
  out["m_hat"] = estimate.m_hat;
  out["alpha_used"] = estimate.alpha_used;
  out["spectrum"] = spectrum_json(spectrum);
  out["trail"] = trail_json(estimate);
  write_output(output, out.dump(2) + "\n");
  return 0;
}

int run_trends(const std::string& input, const std::string& output,
               const TransformFlags& transforms, const TestFlags& flags,
               int m_override, const std::vector<int>& identify_series,
               const std::string& loadings_csv, const std::string& trends_csv) {
  const TimeSeriesPanel panel = apply_transforms(read_input(input), transforms);
  const MomentPair mp = moment_matrices(panel);

  int m = m_override;
  json estimate_echo;
  if (m <= 0) {
    const EigenSpectrum spectrum = relative_spectrum(mp, flags.ridge);
    const RankEstimate estimate =
        estimate_bottom_up(spectrum, static_cast<double>(panel.t()),
                           flags.test_config(), flags.level_schedule());
    m = estimate.m_hat;
    estimate_echo["m_hat"] = estimate.m_hat;
    estimate_echo["trail"] = trail_json(estimate);
    if (m == 0) {
      throw numerical_error("InvalidM",
                            "estimated zero common trends; pass --m to force "
                            "a decomposition");
    }
  }

  TrendDecomposition dec = pc_decompose(panel, m, mp);
  if (!identify_series.empty()) {
    std::vector<int> ordering;
    std::vector<bool> used(static_cast<std::size_t>(panel.n()), false);
    for (int idx : identify_series) {
      if (idx < 1 || idx > panel.n()) {
        throw input_error("InvalidM", "--identify index " +
                                          std::to_string(idx) +
                                          " is out of range");
      }
      if (used[static_cast<std::size_t>(idx - 1)]) {
        throw input_error("InvalidM", "--identify indices must be distinct");
      }
      used[static_cast<std::size_t>(idx - 1)] = true;
      ordering.push_back(idx - 1);
    }
    for (Eigen::Index i = 0; i < panel.n(); ++i) {
      if (!used[static_cast<std::size_t>(i)]) {
        ordering.push_back(static_cast<int>(i));
      }
    }
    dec = identify(dec, ordering);
  }

  json out;
  out["config"] = config_echo("trends", input, transforms, flags);
  out["config"]["m"] = m;
  if (!estimate_echo.is_null()) out["estimate"] = estimate_echo;
  out["identified"] = dec.identified;
  json order = json::array();
  for (int idx : dec.ordering) order.push_back(idx + 1);
  out["ordering"] = order;
  out["series"] = dec.series_names;
  json loadings = json::array();
  for (Eigen::Index i = 0; i < dec.loadings.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < dec.loadings.cols(); ++k) {
      row.push_back(dec.loadings(i, k));
    }
    loadings.push_back(std::move(row));
  }
  out["loadings"] = loadings;
  json trend_rows = json::array();
  for (Eigen::Index k = 0; k < dec.trends.rows(); ++k) {
    json row = json::array();
    for (Eigen::Index t = 0; t < dec.trends.cols(); ++t) {
      row.push_back(dec.trends(k, t));
    }
    trend_rows.push_back(std::move(row));
  }
  out["trends"] = trend_rows;
  out["max_abs_residual"] = dec.residuals.cwiseAbs().maxCoeff();
  write_output(output, out.dump(2) + "\n");

  char buf[32];
  if (!loadings_csv.empty()) {
    std::ostringstream csv;
    csv << "series";
    for (Eigen::Index k = 0; k < dec.loadings.cols(); ++k) {
      csv << ",x" << (k + 1);
    }
    csv << "\n";
    for (Eigen::Index i = 0; i < dec.loadings.rows(); ++i) {
      csv << dec.series_names[static_cast<std::size_t>(i)];
      for (Eigen::Index k = 0; k < dec.loadings.cols(); ++k) {
        std::snprintf(buf, sizeof(buf), "%.17g", dec.loadings(i, k));
        csv << "," << buf;
      }
      csv << "\n";
    }
    write_output(loadings_csv, csv.str());
  }
  if (!trends_csv.empty()) {
    std::ostringstream csv;
    for (Eigen::Index k = 0; k < dec.trends.rows(); ++k) {
      if (k > 0) csv << ",";
      csv << "x" << (k + 1);
    }
    csv << "\n";
    for (Eigen::Index t = 0; t < dec.trends.cols(); ++t) {
      for (Eigen::Index k = 0; k < dec.trends.rows(); ++k) {
        std::snprintf(buf, sizeof(buf), "%.17g", dec.trends(k, t));
        if (k > 0) csv << ",";
        csv << buf;
      }
      csv << "\n";
    }
    write_output(trends_csv, csv.str());
  }
  return 0;
}

int run_simulate(const std::string& output, int n, int m, long t,
                 std::optional<double> eta, bool gaussian, double theta,
                 const std::string& scale, long burn_in, std::uint64_t seed,
                 std::optional<std::uint64_t> d_seed) {
  DgpConfig config;
  config.n_dim = n;
  config.m_trends = m;
  config.t_len = t;
  config.eta = gaussian ? std::nullopt : eta;
  config.ar_theta = theta;
  config.scale = parse_scale(scale);
  config.burn_in = burn_in;
  config.seed = seed;
  config.d_matrix_seed = d_seed.value_or(seed);

  const TimeSeriesPanel panel = simulate_panel(config);
  std::vector<std::string> comments = {
      "trendrank simulate",
      "n = " + std::to_string(n),
      "m = " + std::to_string(m),
      "t = " + std::to_string(t),
      "eta = " + (config.eta ? std::to_string(*config.eta) : "gauss"),
      "theta = " + std::to_string(theta),
      "scale = " + config.scale.label(),
      "burn_in = " + std::to_string(burn_in),
      "seed = " + std::to_string(seed),
      "d_seed = " + std::to_string(config.d_matrix_seed),
  };
  std::ostringstream out;
  write_panel_csv(out, panel, comments);
  write_output(output, out.str());
  return 0;
}

int run_mc(const std::string& config_path, const std::string& output,
           const std::string& format_name, std::uint64_t seed, int threads) {
  McExperiment experiment = parse_experiment_file(config_path);
  experiment.seed = seed;
  if (threads > 0) experiment.threads = threads;

  TableFormat format = TableFormat::CSV;
  if (format_name == "csv") {
    format = TableFormat::CSV;
  } else if (format_name == "json") {
    format = TableFormat::JSON;
  } else if (format_name == "text") {
    format = TableFormat::PrettyText;
  } else {
    throw input_error("ParseError", "unknown format '" + format_name + "'");
  }

  const std::vector<McCell> cells = run_experiment(experiment);
  std::string table = emit_tables(cells, format);
  if (format != TableFormat::JSON) {
    // Prepend the resolved configuration so results are self-describing.
    std::ostringstream head;
    head << "# trendrank mc\n# config = " << config_path
         << "\n# seed = " << seed << "\n# threads = " << experiment.threads
         << "\n";
    table = head.str() + table;
  } else {
    json wrapped = json::parse(table);
    wrapped["config"] = {{"command", "mc"},
                         {"config_file", config_path},
                         {"seed", seed},
                         {"threads", experiment.threads}};
    table = wrapped.dump(2) + "\n";
  }
  write_output(output, table);
  return 0;
}

int run_hill(const std::string& input, const std::string& output, bool log,
             int k_flag) {
  TransformFlags transforms;
  transforms.log = log;
  const TimeSeriesPanel panel = apply_transforms(read_input(input), transforms);
  if (panel.t() < 2) {
    throw input_error("TooShort", "hill needs at least two observations");
  }

  json out;
  out["config"] = {{"command", "hill"},
                   {"input", input},
                   {"log", log},
                   {"k", k_flag},
                   {"applied_to", "first differences"}};
  json results = json::array();
  for (Eigen::Index i = 0; i < panel.n(); ++i) {
    std::vector<double> diffs(static_cast<std::size_t>(panel.t() - 1));
    for (Eigen::Index t = 1; t < panel.t(); ++t) {
      diffs[static_cast<std::size_t>(t - 1)] =
          panel.values(i, t) - panel.values(i, t - 1);
    }
    const int k = k_flag > 0 ? k_flag : default_hill_k(diffs.size());
    const TailEstimate estimate = hill_estimator(diffs, k);
    json item;
    item["series"] = panel.series_names[static_cast<std::size_t>(i)];
    item["eta_hat"] = estimate.eta_hat;
    item["k_used"] = estimate.k_used;
    item["ci_low"] = estimate.ci_low;
    item["ci_high"] = estimate.ci_high;
    results.push_back(std::move(item));
  }
  out["series"] = results;
  write_output(output, out.dump(2) + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Common stochastic trend detection and extraction for "
               "heavy-tailed panels"};
  app.require_subcommand(1);

  // estimate
  auto* estimate = app.add_subcommand("estimate",
                                      "estimate the number of common trends");
  std::string est_input = "-", est_output = "-", est_algorithm = "bottom-up";
  TransformFlags est_transforms;
  TestFlags est_flags;
  estimate->add_option("--input", est_input, "CSV panel path or - for stdin")
      ->capture_default_str();
  estimate->add_option("--output", est_output, "JSON output path or -")
      ->capture_default_str();
  estimate->add_option("--algorithm", est_algorithm, "bottom-up | top-down")
      ->capture_default_str();
  add_transform_flags(estimate, est_transforms);
  add_test_flags(estimate, est_flags, false);

  // trends
  auto* trends_cmd = app.add_subcommand("trends",
                                        "extract trends and loadings");
  std::string tr_input = "-", tr_output = "-", tr_loadings, tr_trends;
  int tr_m = 0;
  std::vector<int> tr_identify;
  TransformFlags tr_transforms;
  TestFlags tr_flags;
  trends_cmd->add_option("--input", tr_input, "CSV panel path or -")
      ->capture_default_str();
  trends_cmd->add_option("--output", tr_output, "JSON output path or -")
      ->capture_default_str();
  trends_cmd->add_option("--m", tr_m,
                         "trend count; 0 estimates it first (bottom-up)")
      ->capture_default_str();
  trends_cmd->add_option("--identify", tr_identify,
                         "1-based series indices whose loading block becomes "
                         "the identity")
      ->delimiter(',');
  trends_cmd->add_option("--loadings-csv", tr_loadings,
                         "also write loadings as CSV here");
  trends_cmd->add_option("--trends-csv", tr_trends,
                         "also write trends as CSV here");
  add_transform_flags(trends_cmd, tr_transforms);
  add_test_flags(trends_cmd, tr_flags, false);

  // simulate
  auto* simulate = app.add_subcommand("simulate", "generate a VAR(1) panel");
  int sim_n = 3, sim_m = 1;
  long sim_t = 200, sim_burn = 0;
  double sim_eta = 1.0, sim_theta = 0.0;
  bool sim_gaussian = false;
  std::string sim_scale = "none", sim_output = "-";
  std::uint64_t sim_seed = 0;
  std::optional<std::uint64_t> sim_d_seed;
  simulate->add_option("--n", sim_n, "panel dimension")->capture_default_str();
  simulate->add_option("--m", sim_m, "number of common trends")
      ->capture_default_str();
  simulate->add_option("--t", sim_t, "sample length")->capture_default_str();
  simulate->add_option("--eta", sim_eta, "power-law tail index")
      ->capture_default_str();
  simulate->add_flag("--gaussian", sim_gaussian,
                     "standard normal innovations instead of power-law");
  simulate->add_option("--theta", sim_theta, "AR(1) innovation coefficient")
      ->capture_default_str();
  simulate->add_option("--scale", sim_scale,
                       "none | steps:b:l[:b:l...] | poly:c0[:c1...]")
      ->capture_default_str();
  simulate->add_option("--burn-in", sim_burn, "discarded presample length")
      ->capture_default_str();
  simulate->add_option("--seed", sim_seed, "innovation seed")
      ->capture_default_str();
  simulate->add_option("--d-seed", sim_d_seed,
                       "design matrix seed (defaults to --seed)");
  simulate->add_option("--output", sim_output, "CSV output path or -")
      ->capture_default_str();

  // mc
  auto* mc = app.add_subcommand("mc", "run a Monte Carlo experiment grid");
  std::string mc_config, mc_output = "-", mc_format = "csv";
  std::uint64_t mc_seed = 0;
  int mc_threads = 0;
  mc->add_option("--config", mc_config, "experiment grid file")->required();
  mc->add_option("--output", mc_output, "output path or -")
      ->capture_default_str();
  mc->add_option("--format", mc_format, "csv | json | text")
      ->capture_default_str();
  mc->add_option("--seed", mc_seed, "root seed (required; runs must be "
                                    "reproducible)")
      ->required();
  mc->add_option("--threads", mc_threads,
                 "worker threads (0 = hardware); TRENDRANK_THREADS caps this")
      ->capture_default_str();

  // hill
  auto* hill = app.add_subcommand("hill", "tail-index diagnostic per series");
  std::string hill_input = "-", hill_output = "-";
  bool hill_log = false;
  int hill_k = 0;
  hill->add_option("--input", hill_input, "CSV panel path or -")
      ->capture_default_str();
  hill->add_option("--output", hill_output, "JSON output path or -")
      ->capture_default_str();
  hill->add_flag("--log", hill_log, "log-transform before differencing");
  hill->add_option("--k", hill_k,
                   "order statistics count (0 = round(sqrt(n)))")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::ostringstream msg;
    msg << e.what();
    std::string line = msg.str();
    for (char& ch : line) {
      if (ch == '\n') ch = ' ';
    }
    std::cerr << "ERROR BadFlags " << line << "\n";
    return 2;
  }

  try {
    if (*estimate) {
      return run_estimate(est_input, est_output, est_transforms, est_flags,
                          est_algorithm);
    }
    if (*trends_cmd) {
      return run_trends(tr_input, tr_output, tr_transforms, tr_flags, tr_m,
                        tr_identify, tr_loadings, tr_trends);
    }
    if (*simulate) {
      return run_simulate(sim_output, sim_n, sim_m, sim_t, sim_eta,
                          sim_gaussian, sim_theta, sim_scale, sim_burn,
                          sim_seed, sim_d_seed);
    }
    if (*mc) {
      return run_mc(mc_config, mc_output, mc_format, mc_seed, mc_threads);
    }
    if (*hill) {
      return run_hill(hill_input, hill_output, hill_log, hill_k);
    }
  } catch (const Error& e) {
    std::string line = e.what();
    for (char& ch : line) {
      if (ch == '\n') ch = ' ';
    }
    std::cerr << "ERROR " << e.code() << " " << line << "\n";
    return e.kind() == ErrorKind::Input ? 2 : 3;
  } catch (const std::exception& e) {
    std::cerr << "ERROR Internal " << e.what() << "\n";
    return 3;
  }
  return 0;
}
