#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "trendrank/rank.hpp"
#include "trendrank/rtest.hpp"
#include "trendrank/simulate.hpp"

namespace trendrank {

/// Cartesian experiment grid. Combinations with m > N are skipped.
struct McGrid {
  std::vector<int> n_dims{3};
  std::vector<int> m_trends{0};
  std::vector<long> t_lens{100};
  std::vector<std::optional<double>> etas{1.0};  // nullopt = Gaussian
  std::vector<double> ar_thetas{0.0};
  std::vector<ScaleFunction> scales{ScaleFunction::none()};
  long burn_in = 0;
};

struct McExperiment {
  McGrid grid;
  RandTestConfig test;  // per-test draws; its seed field is ignored here
  LevelSchedule schedule;
  int replications = 1000;
  std::vector<RankAlgorithm> algorithms{RankAlgorithm::BottomUp};
  /// Root seed. Panel, design and test substreams for cell c, replication r
  /// derive from it as derive_seed(seed, {role, c, r, ...}), so cells and
  /// replications are independent of scheduling and replayable one by one.
  std::uint64_t seed = 0;
  /// Worker threads; 0 picks the hardware count. Always capped by the
  /// TRENDRANK_THREADS environment variable when that is set.
  int threads = 0;

  void validate() const;
};

struct GridPoint {
  int n_dim = 0;
  int m_trends = 0;
  long t_len = 0;
  std::optional<double> eta;
  double ar_theta = 0.0;
  std::string scale_label;
  RankAlgorithm algorithm = RankAlgorithm::BottomUp;
};

/// Result for one grid point and algorithm. Frequencies, ME, STD and PCW are
/// computed over the successful replications; failed replications keep the
/// marker -1 in `estimates` and are counted in `failures`. The cell is
/// degraded when more than 1% of replications failed. STD follows the
/// squared-deviation formula as written (a variance); std_sqrt is its root.
/// wall_time is a diagnostic and is never serialised.
struct McCell {
  GridPoint point;
  int replications = 0;
  std::map<int, double> freq_table;
  double me = 0.0;
  double std_paper = 0.0;
  double std_sqrt = 0.0;
  double pcw = 0.0;  // always exactly 1 - freq_table[m]
  double wall_time = 0.0;
  std::vector<int> estimates;  // per replication, -1 = failed
  int failures = 0;
  bool degraded = false;
};

/// Aggregates a finished estimate vector (failures already removed).
struct CellStats {
  std::map<int, double> freq_table;
  double me = 0.0;
  double std_paper = 0.0;
  double pcw = 0.0;
};
CellStats aggregate_estimates(const std::vector<int>& m_hats, int true_m);

/// Runs replications for every grid point through the
/// simulate -> moments -> spectrum -> rank pipeline. Per-replication errors
/// (e.g. a numerically singular difference moment) are recorded, not fatal.
/// Cells appear in deterministic grid order, one per algorithm, and the
/// result is identical for any thread count.
std::vector<McCell> run_experiment(const McExperiment& experiment);

enum class TableFormat { CSV, JSON, PrettyText };

/// Renders cells with stable column order
/// (N, m, T, eta, theta, scale, algorithm, freq_0..freq_K, ME, STD, PCW)
/// and deterministic formatting; frequencies carry three decimals. JSON
/// round-trips every numeric field at full precision.
std::string emit_tables(const std::vector<McCell>& cells, TableFormat format);

/// Reads an experiment from a flat "key = values" text file. Lists are
/// whitespace- or comma-separated; '#' starts a comment. Unknown keys are
/// errors. Recognised keys: n, m, t, eta, theta, scale, burn_in,
/// replications, algorithms, schedule, alpha_base, kappa, m_draws,
/// quadrature, s_reps, seed, threads.
McExperiment parse_experiment_file(std::istream& in);
McExperiment parse_experiment_file(const std::string& path);

/// Value of TRENDRANK_THREADS when set to a positive integer, else 0.
int thread_cap_from_env();

/// Token forms shared by the experiment file and the CLI (':'-separated so
/// commas stay free as list separators):
/// scale: "none" | "steps:b:l[:b:l...]" | "poly:c0[:c1...]"
/// quadrature: "gh2" | "gh4" | "grid:u:w[:u:w...]"
ScaleFunction parse_scale(const std::string& token);
QuadratureSpec parse_quadrature(const std::string& token);

}  // namespace trendrank
