#include "trendrank/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <thread>

#include "trendrank/errors.hpp"

namespace trendrank {

namespace {

struct DgpCell {
  int n_dim = 0;
  int m_trends = 0;
  long t_len = 0;
  std::optional<double> eta;
  double ar_theta = 0.0;
  std::size_t scale_index = 0;
};

std::vector<DgpCell> enumerate_cells(const McGrid& grid) {
  std::vector<DgpCell> cells;
  for (int n : grid.n_dims) {
    for (int m : grid.m_trends) {
      if (m > n) continue;
      for (long t : grid.t_lens) {
        for (const auto& eta : grid.etas) {
          for (double theta : grid.ar_thetas) {
            for (std::size_t s = 0; s < grid.scales.size(); ++s) {
              cells.push_back({n, m, t, eta, theta, s});
            }
          }
        }
      }
    }
  }
  return cells;
}

}  // namespace

void McExperiment::validate() const {
  if (replications < 1) {
    throw input_error("InvalidLevel", "replications must be >= 1");
  }
  if (algorithms.empty()) {
    throw input_error("InvalidLevel", "no algorithms selected");
  }
  if (grid.n_dims.empty() || grid.m_trends.empty() || grid.t_lens.empty() ||
      grid.etas.empty() || grid.ar_thetas.empty() || grid.scales.empty()) {
    throw input_error("InvalidLevel", "experiment grid is empty");
  }
  if (enumerate_cells(grid).empty()) {
    throw input_error("InvalidLevel",
                      "grid has no admissible (N, m) combination");
  }
  test.validate();
}

CellStats aggregate_estimates(const std::vector<int>& m_hats, int true_m) {
  CellStats stats;
  if (m_hats.empty()) return stats;
  const double count = static_cast<double>(m_hats.size());
  double sum = 0.0;
  for (int m : m_hats) {
    stats.freq_table[m] += 1.0;
    sum += m;
  }
  for (auto& [value, freq] : stats.freq_table) freq /= count;
  stats.me = sum / count;
  double sq = 0.0;
  for (int m : m_hats) {
    const double d = static_cast<double>(m) - stats.me;
    sq += d * d;
  }
  stats.std_paper = sq / count;
  const auto hit = stats.freq_table.find(true_m);
  stats.pcw = 1.0 - (hit == stats.freq_table.end() ? 0.0 : hit->second);
  return stats;
}

int thread_cap_from_env() {
  const char* value = std::getenv("TRENDRANK_THREADS");
  if (value == nullptr) return 0;
  const long parsed = std::strtol(value, nullptr, 10);
  return parsed > 0 ? static_cast<int>(parsed) : 0;
}

std::vector<McCell> run_experiment(const McExperiment& experiment) {
  experiment.validate();
  const std::vector<DgpCell> cells = enumerate_cells(experiment.grid);
  const int reps = experiment.replications;
  const std::size_t n_algorithms = experiment.algorithms.size();

  // estimates[cell * n_algorithms + a][rep]; -1 marks a failed replication.
  std::vector<std::vector<int>> estimates(
      cells.size() * n_algorithms,
      std::vector<int>(static_cast<std::size_t>(reps), -1));
  std::vector<std::atomic<int>> failures(cells.size());
  std::vector<std::atomic<long>> cell_nanos(cells.size());
  for (auto& f : failures) f.store(0);
  for (auto& ns : cell_nanos) ns.store(0);

  int threads = experiment.threads > 0
                    ? experiment.threads
                    : static_cast<int>(std::thread::hardware_concurrency());
  if (threads < 1) threads = 1;
  if (const int cap = thread_cap_from_env(); cap > 0) {
    threads = std::min(threads, cap);
  }
  const std::size_t total_tasks = cells.size() * static_cast<std::size_t>(reps);
  threads = static_cast<int>(
      std::min<std::size_t>(static_cast<std::size_t>(threads), total_tasks));

  std::atomic<std::size_t> next_task{0};
  auto worker = [&]() {
    while (true) {
      const std::size_t task = next_task.fetch_add(1);
      if (task >= total_tasks) break;
      const std::size_t cell_index = task / static_cast<std::size_t>(reps);
      const std::uint64_t rep = task % static_cast<std::size_t>(reps);
      const DgpCell& cell = cells[cell_index];
      const auto started = std::chrono::steady_clock::now();

      try {
        DgpConfig dgp;
        dgp.n_dim = cell.n_dim;
        dgp.m_trends = cell.m_trends;
        dgp.t_len = cell.t_len;
        dgp.eta = cell.eta;
        dgp.ar_theta = cell.ar_theta;
        dgp.scale = experiment.grid.scales[cell.scale_index];
        dgp.burn_in = experiment.grid.burn_in;
        dgp.seed =
            derive_seed(experiment.seed, {stream::kMcPanel, cell_index, rep});
        dgp.d_matrix_seed =
            derive_seed(experiment.seed, {stream::kMcDesign, cell_index});

        const TimeSeriesPanel panel = simulate_panel(dgp);
        const MomentPair mp = moment_matrices(panel);
        const EigenSpectrum spectrum = relative_spectrum(mp);

        for (std::size_t a = 0; a < n_algorithms; ++a) {
          RandTestConfig test = experiment.test;
          test.seed = derive_seed(experiment.seed,
                                  {stream::kMcTest, cell_index, rep,
                                   static_cast<std::uint64_t>(a)});
          const RankEstimate estimate = estimate_rank(
              experiment.algorithms[a], spectrum,
              static_cast<double>(cell.t_len), test, experiment.schedule);
          estimates[cell_index * n_algorithms + a][rep] = estimate.m_hat;
        }
      } catch (const Error&) {
        failures[cell_index].fetch_add(1);
      }

      const auto elapsed = std::chrono::steady_clock::now() - started;
      cell_nanos[cell_index].fetch_add(
          std::chrono::duration_cast<std::chrono::nanoseconds>(elapsed)
              .count());
    }
  };

  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  std::vector<McCell> out;
  out.reserve(cells.size() * n_algorithms);
  for (std::size_t c = 0; c < cells.size(); ++c) {
    for (std::size_t a = 0; a < n_algorithms; ++a) {
      McCell result;
      result.point = GridPoint{cells[c].n_dim,
                               cells[c].m_trends,
                               cells[c].t_len,
                               cells[c].eta,
                               cells[c].ar_theta,
                               experiment.grid.scales[cells[c].scale_index].label(),
                               experiment.algorithms[a]};
      result.replications = reps;
      result.estimates = estimates[c * n_algorithms + a];
      result.failures = failures[c].load();
      result.degraded = result.failures * 100 > reps;
      result.wall_time = static_cast<double>(cell_nanos[c].load()) * 1e-9;

      std::vector<int> successes;
      successes.reserve(result.estimates.size());
      for (int m : result.estimates) {
        if (m >= 0) successes.push_back(m);
      }
      const CellStats stats = aggregate_estimates(successes, cells[c].m_trends);
      result.freq_table = stats.freq_table;
      result.me = stats.me;
      result.std_paper = stats.std_paper;
      result.std_sqrt = std::sqrt(stats.std_paper);
      result.pcw = stats.pcw;
      out.push_back(std::move(result));
    }
  }
  return out;
}

namespace {

std::string format_eta(const std::optional<double>& eta) {
  if (!eta.has_value()) return "gauss";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", *eta);
  return buf;
}

std::string fixed3(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", x);
  return buf;
}

std::string fixed6(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", x);
  return buf;
}

int max_dimension(const std::vector<McCell>& cells) {
  int n_max = 0;
  for (const auto& cell : cells) n_max = std::max(n_max, cell.point.n_dim);
  return n_max;
}

std::string emit_csv(const std::vector<McCell>& cells) {
  const int n_max = max_dimension(cells);
  std::ostringstream out;
  out << "n,m,t,eta,theta,scale,algorithm,replications,failures";
  for (int j = 0; j <= n_max; ++j) out << ",freq_" << j;
  out << ",me,std,pcw\n";
  for (const auto& cell : cells) {
    out << cell.point.n_dim << "," << cell.point.m_trends << ","
        << cell.point.t_len << "," << format_eta(cell.point.eta) << ","
        << cell.point.ar_theta << "," << cell.point.scale_label << ","
        << algorithm_name(cell.point.algorithm) << "," << cell.replications
        << "," << cell.failures;
    for (int j = 0; j <= n_max; ++j) {
      out << ",";
      if (j <= cell.point.n_dim) {
        const auto hit = cell.freq_table.find(j);
        out << fixed3(hit == cell.freq_table.end() ? 0.0 : hit->second);
      }
    }
    out << "," << fixed6(cell.me) << "," << fixed6(cell.std_paper) << ","
        << fixed6(cell.pcw) << "\n";
  }
  return out.str();
}

std::string emit_json(const std::vector<McCell>& cells) {
  nlohmann::json root;
  root["cells"] = nlohmann::json::array();
  for (const auto& cell : cells) {
    nlohmann::json item;
    item["n"] = cell.point.n_dim;
    item["m"] = cell.point.m_trends;
    item["t"] = cell.point.t_len;
    if (cell.point.eta.has_value()) {
      item["eta"] = *cell.point.eta;
    } else {
      item["eta"] = nullptr;
    }
    item["theta"] = cell.point.ar_theta;
    item["scale"] = cell.point.scale_label;
    item["algorithm"] = algorithm_name(cell.point.algorithm);
    item["replications"] = cell.replications;
    item["failures"] = cell.failures;
    item["degraded"] = cell.degraded;
    nlohmann::json freq = nlohmann::json::object();
    for (const auto& [value, share] : cell.freq_table) {
      freq[std::to_string(value)] = share;
    }
    item["freq"] = freq;
    item["me"] = cell.me;
    item["std"] = cell.std_paper;
    item["std_sqrt"] = cell.std_sqrt;
    item["pcw"] = cell.pcw;
    root["cells"].push_back(std::move(item));
  }
  return root.dump(2) + "\n";
}

std::string emit_pretty(const std::vector<McCell>& cells) {
  const int n_max = max_dimension(cells);
  int scale_width = 5;
  for (const auto& cell : cells) {
    scale_width = std::max(scale_width,
                           static_cast<int>(cell.point.scale_label.size()));
  }
  std::ostringstream out;
  char buf[128];
  std::snprintf(buf, sizeof(buf), "%3s %3s %6s %6s %6s  %-*s  %-9s", "n", "m",
                "t", "eta", "theta", scale_width, "scale", "algorithm");
  out << buf;
  for (int j = 0; j <= n_max; ++j) {
    std::snprintf(buf, sizeof(buf), " %6s", ("f(" + std::to_string(j) + ")").c_str());
    out << buf;
  }
  out << "      me     std     pcw\n";
  for (const auto& cell : cells) {
    std::snprintf(buf, sizeof(buf), "%3d %3d %6ld %6s %6g  %-*s  %-9s",
                  cell.point.n_dim, cell.point.m_trends, cell.point.t_len,
                  format_eta(cell.point.eta).c_str(), cell.point.ar_theta,
                  scale_width, cell.point.scale_label.c_str(),
                  algorithm_name(cell.point.algorithm).c_str());
    out << buf;
    for (int j = 0; j <= n_max; ++j) {
      if (j <= cell.point.n_dim) {
        const auto hit = cell.freq_table.find(j);
        out << " " << std::string(2, ' ')
            << fixed3(hit == cell.freq_table.end() ? 0.0 : hit->second);
      } else {
        out << "       ";
      }
    }
    out << "   " << fixed3(cell.me) << "   " << fixed3(cell.std_paper) << "   "
        << fixed3(cell.pcw) << "\n";
  }
  return out.str();
}

}  // namespace

std::string emit_tables(const std::vector<McCell>& cells, TableFormat format) {
  if (cells.empty()) {
    throw input_error("InvalidLevel", "no cells to emit");
  }
  switch (format) {
    case TableFormat::CSV:
      return emit_csv(cells);
    case TableFormat::JSON:
      return emit_json(cells);
    case TableFormat::PrettyText:
      return emit_pretty(cells);
  }
  throw input_error("InvalidLevel", "unknown table format");
}

namespace {

std::vector<std::string> tokenize(const std::string& text) {
  std::vector<std::string> tokens;
  std::string token;
  for (char ch : text) {
    if (ch == ' ' || ch == '\t' || ch == ',') {
      if (!token.empty()) tokens.push_back(std::move(token));
      token.clear();
    } else {
      token.push_back(ch);
    }
  }
  if (!token.empty()) tokens.push_back(std::move(token));
  return tokens;
}

double parse_double(const std::string& token, const std::string& key) {
  char* end = nullptr;
  const double value = std::strtod(token.c_str(), &end);
  if (end != token.c_str() + token.size()) {
    throw input_error("ParseError",
                      "bad numeric value '" + token + "' for key " + key);
  }
  return value;
}

long parse_long(const std::string& token, const std::string& key) {
  char* end = nullptr;
  const long value = std::strtol(token.c_str(), &end, 10);
  if (end != token.c_str() + token.size()) {
    throw input_error("ParseError",
                      "bad integer value '" + token + "' for key " + key);
  }
  return value;
}

}  // namespace

ScaleFunction parse_scale(const std::string& token) {
  if (token == "none") return ScaleFunction::none();
  if (token.rfind("steps:", 0) == 0) {
    std::vector<std::pair<double, double>> steps;
    std::stringstream ss(token.substr(6));
    std::string item;
    std::vector<double> flat;
    while (std::getline(ss, item, ':')) {
      flat.push_back(parse_double(item, "scale"));
    }
    if (flat.size() % 2 != 0 || flat.empty()) {
      throw input_error("ParseError",
                        "steps scale needs breakpoint:level pairs");
    }
    for (std::size_t i = 0; i < flat.size(); i += 2) {
      steps.emplace_back(flat[i], flat[i + 1]);
    }
    return ScaleFunction::piecewise(std::move(steps));
  }
  if (token.rfind("poly:", 0) == 0) {
    std::vector<double> coeffs;
    std::stringstream ss(token.substr(5));
    std::string item;
    while (std::getline(ss, item, ':')) {
      coeffs.push_back(parse_double(item, "scale"));
    }
    return ScaleFunction::polynomial(std::move(coeffs));
  }
  throw input_error("ParseError", "unknown scale '" + token + "'");
}

QuadratureSpec parse_quadrature(const std::string& token) {
  if (token == "gh2") return QuadratureSpec::gh2();
  if (token == "gh4") return QuadratureSpec::gh4();
  if (token.rfind("grid:", 0) == 0) {
    std::vector<QuadratureNode> nodes;
    std::stringstream ss(token.substr(5));
    std::string item;
    std::vector<double> flat;
    while (std::getline(ss, item, ':')) {
      flat.push_back(parse_double(item, "quadrature"));
    }
    if (flat.size() % 2 != 0 || flat.empty()) {
      throw input_error("ParseError", "grid quadrature needs u:w pairs");
    }
    for (std::size_t i = 0; i < flat.size(); i += 2) {
      nodes.push_back({flat[i], flat[i + 1]});
    }
    return QuadratureSpec::explicit_grid(std::move(nodes));
  }
  throw input_error("ParseError", "unknown quadrature '" + token + "'");
}

McExperiment parse_experiment_file(std::istream& in) {
  McExperiment experiment;
  McGrid grid;
  grid.n_dims.clear();
  grid.m_trends.clear();
  grid.t_lens.clear();
  grid.etas.clear();
  grid.ar_thetas.clear();
  grid.scales.clear();
  experiment.algorithms.clear();

  std::string line;
  long line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      if (!tokenize(line).empty()) {
        throw input_error("ParseError", "expected 'key = values' at line " +
                                            std::to_string(line_number));
      }
      continue;
    }
    const auto key_tokens = tokenize(line.substr(0, eq));
    if (key_tokens.size() != 1) {
      throw input_error("ParseError", "bad key at line " +
                                          std::to_string(line_number));
    }
    const std::string& key = key_tokens[0];
    const auto values = tokenize(line.substr(eq + 1));
    if (values.empty()) {
      throw input_error("ParseError",
                        "no values for key '" + key + "' at line " +
                            std::to_string(line_number));
    }

    if (key == "n") {
      for (const auto& v : values)
        grid.n_dims.push_back(static_cast<int>(parse_long(v, key)));
    } else if (key == "m") {
      for (const auto& v : values)
        grid.m_trends.push_back(static_cast<int>(parse_long(v, key)));
    } else if (key == "t") {
      for (const auto& v : values) grid.t_lens.push_back(parse_long(v, key));
    } else if (key == "eta") {
      for (const auto& v : values) {
        if (v == "gauss") {
          grid.etas.push_back(std::nullopt);
        } else {
          grid.etas.push_back(parse_double(v, key));
        }
      }
    } else if (key == "theta") {
      for (const auto& v : values)
        grid.ar_thetas.push_back(parse_double(v, key));
    } else if (key == "scale") {
      for (const auto& v : values) grid.scales.push_back(parse_scale(v));
    } else if (key == "burn_in") {
      grid.burn_in = parse_long(values.at(0), key);
    } else if (key == "replications") {
      experiment.replications = static_cast<int>(parse_long(values.at(0), key));
    } else if (key == "algorithms") {
      for (const auto& v : values) {
        experiment.algorithms.push_back(algorithm_from_name(v));
      }
    } else if (key == "schedule") {
      experiment.schedule.kind = schedule_from_name(values.at(0));
    } else if (key == "alpha_base") {
      experiment.schedule.base = parse_double(values.at(0), key);
    } else if (key == "kappa") {
      experiment.test.kappa = parse_double(values.at(0), key);
    } else if (key == "m_draws") {
      experiment.test.m_draws = static_cast<int>(parse_long(values.at(0), key));
    } else if (key == "quadrature") {
      experiment.test.quadrature = parse_quadrature(values.at(0));
    } else if (key == "s_reps") {
      experiment.test.s_reps = static_cast<int>(parse_long(values.at(0), key));
    } else if (key == "seed") {
      experiment.seed = static_cast<std::uint64_t>(parse_long(values.at(0), key));
    } else if (key == "threads") {
      experiment.threads = static_cast<int>(parse_long(values.at(0), key));
    } else {
      throw input_error("ParseError", "unknown key '" + key + "' at line " +
                                          std::to_string(line_number));
    }
  }

  if (grid.ar_thetas.empty()) grid.ar_thetas.push_back(0.0);
  if (grid.scales.empty()) grid.scales.push_back(ScaleFunction::none());
  if (grid.etas.empty()) grid.etas.push_back(1.0);
  if (experiment.algorithms.empty()) {
    experiment.algorithms.push_back(RankAlgorithm::BottomUp);
  }
  experiment.grid = grid;
  return experiment;
}

McExperiment parse_experiment_file(const std::string& path) {
  std::ifstream in(path);
  if (!in.is_open()) {
    throw input_error("ParseError", "cannot open '" + path + "'");
  }
  return parse_experiment_file(in);
}

}  // namespace trendrank
