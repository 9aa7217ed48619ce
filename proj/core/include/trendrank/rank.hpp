#pragma once

#include <string>
#include <vector>

#include "trendrank/rtest.hpp"
#include "trendrank/spectra.hpp"

namespace trendrank {

/// Per-test significance level as a function of the sample.
/// OverT: base/T, OverLogT: base/ln(T), OverN: base/N (the Bonferroni
/// choice), Fixed: base itself.
enum class ScheduleKind { OverT, OverLogT, OverN, Fixed };

struct LevelSchedule {
  ScheduleKind kind = ScheduleKind::OverT;
  double base = 0.05;
};

double resolve_alpha(const LevelSchedule& schedule, double t_len, int n_dim);

std::string schedule_name(ScheduleKind kind);
ScheduleKind schedule_from_name(const std::string& name);

enum class RankAlgorithm { BottomUp, TopDown };

std::string algorithm_name(RankAlgorithm algorithm);
RankAlgorithm algorithm_from_name(const std::string& name);

/// One executed hypothesis test. For single-shot runs statistic/critical are
/// the weighted statistic and its chi-square quantile; under the strong rule
/// they are the acceptance fraction Q and the LIL threshold.
struct RankStep {
  int j = 0;
  double statistic = 0.0;
  double critical = 0.0;
  bool reject = false;
};

struct RankEstimate {
  int m_hat = 0;
  RankAlgorithm algorithm = RankAlgorithm::BottomUp;
  std::vector<RankStep> trail;  // in execution order, one entry per test run
  double alpha_used = 0.0;
};

/// Bottom-up search: test j = 1, 2, ... in turn; the first rejection at j
/// stops with m_hat = j - 1, and surviving all N tests gives m_hat = N.
/// Each hypothesis j draws from its own substream
/// derive_seed(config.seed, {stream::kTest, algorithm, j}), so the tests are
/// conditionally independent across j and replayable in isolation.
RankEstimate estimate_bottom_up(const EigenSpectrum& spectrum, double t_len,
                                const RandTestConfig& config,
                                const LevelSchedule& schedule);

/// Top-down search: test j = N, N-1, ...; descend while rejecting, stop with
/// m_hat = j at the first non-rejection, and m_hat = 0 when j = 1 also
/// rejects.
RankEstimate estimate_top_down(const EigenSpectrum& spectrum, double t_len,
                               const RandTestConfig& config,
                               const LevelSchedule& schedule);

RankEstimate estimate_rank(RankAlgorithm algorithm,
                           const EigenSpectrum& spectrum, double t_len,
                           const RandTestConfig& config,
                           const LevelSchedule& schedule);

}  // namespace trendrank
