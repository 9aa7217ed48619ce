#include "trendrank/rank.hpp"

#include <cmath>

#include "trendrank/errors.hpp"

namespace trendrank {

double resolve_alpha(const LevelSchedule& schedule, double t_len, int n_dim) {
  if (!(t_len >= 3.0)) {
    throw input_error("TooShort", "level schedules need t_len >= 3");
  }
  if (n_dim < 1) {
    throw input_error("InvalidLevel", "n_dim must be positive");
  }
  double alpha = 0.0;
  switch (schedule.kind) {
    case ScheduleKind::OverT:
      alpha = schedule.base / t_len;
      break;
    case ScheduleKind::OverLogT:
      alpha = schedule.base / std::log(t_len);
      break;
    case ScheduleKind::OverN:
      alpha = schedule.base / static_cast<double>(n_dim);
      break;
    case ScheduleKind::Fixed:
      alpha = schedule.base;
      break;
  }
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw input_error("InvalidLevel",
                      "resolved level " + std::to_string(alpha) +
                          " is outside (0, 1)");
  }
  return alpha;
}

std::string schedule_name(ScheduleKind kind) {
  switch (kind) {
    case ScheduleKind::OverT:
      return "over-t";
    case ScheduleKind::OverLogT:
      return "over-log-t";
    case ScheduleKind::OverN:
      return "over-n";
    case ScheduleKind::Fixed:
      return "fixed";
  }
  return "unknown";
}

ScheduleKind schedule_from_name(const std::string& name) {
  if (name == "over-t") return ScheduleKind::OverT;
  if (name == "over-log-t") return ScheduleKind::OverLogT;
  if (name == "over-n") return ScheduleKind::OverN;
  if (name == "fixed") return ScheduleKind::Fixed;
  throw input_error("InvalidLevel", "unknown schedule '" + name + "'");
}

std::string algorithm_name(RankAlgorithm algorithm) {
  return algorithm == RankAlgorithm::BottomUp ? "bottom-up" : "top-down";
}

RankAlgorithm algorithm_from_name(const std::string& name) {
  if (name == "bottom-up") return RankAlgorithm::BottomUp;
  if (name == "top-down") return RankAlgorithm::TopDown;
  throw input_error("InvalidLevel", "unknown algorithm '" + name + "'");
}

namespace {

RandTestResult run_hypothesis(const RandTestConfig& config, double phi_log,
                              RankAlgorithm algorithm, int j) {
  const std::uint64_t j_root = derive_seed(
      config.seed, {stream::kTest,
                    static_cast<std::uint64_t>(algorithm == RankAlgorithm::TopDown),
                    static_cast<std::uint64_t>(j)});
  RandTestResult result;
  if (config.s_reps > 1) {
    result = strong_rule(config, phi_log, j_root);
  } else {
    RngStream stream(derive_seed(j_root, {0}));
    result = theta_big(config, phi_log, stream);
  }
  result.j = j;
  return result;
}

RankStep to_step(const RandTestResult& result) {
  RankStep step;
  step.j = result.j;
  if (result.q_strong.has_value()) {
    step.statistic = *result.q_strong;
    step.critical = *result.strong_threshold;
  } else {
    step.statistic = result.theta_big;
    step.critical = result.c_alpha;
  }
  step.reject = result.reject;
  return step;
}

}  // namespace

RankEstimate estimate_bottom_up(const EigenSpectrum& spectrum, double t_len,
                                const RandTestConfig& config,
                                const LevelSchedule& schedule) {
  const int n = static_cast<int>(spectrum.lambdas.size());
  RandTestConfig test = config;
  test.alpha = resolve_alpha(schedule, t_len, n);

  RankEstimate estimate;
  estimate.algorithm = RankAlgorithm::BottomUp;
  estimate.alpha_used = test.alpha;
  estimate.m_hat = n;
  for (int j = 1; j <= n; ++j) {
    const double phi_log = phi_statistic(
        spectrum.lambdas[static_cast<std::size_t>(j - 1)], t_len, test.kappa);
    const RandTestResult result =
        run_hypothesis(test, phi_log, RankAlgorithm::BottomUp, j);
    estimate.trail.push_back(to_step(result));
    if (result.reject) {
      estimate.m_hat = j - 1;
      break;
    }
  }
  return estimate;
}

RankEstimate estimate_top_down(const EigenSpectrum& spectrum, double t_len,
                               const RandTestConfig& config,
                               const LevelSchedule& schedule) {
  const int n = static_cast<int>(spectrum.lambdas.size());
  RandTestConfig test = config;
  test.alpha = resolve_alpha(schedule, t_len, n);

  RankEstimate estimate;
  estimate.algorithm = RankAlgorithm::TopDown;
  estimate.alpha_used = test.alpha;
  estimate.m_hat = 0;
  for (int j = n; j >= 1; --j) {
    const double phi_log = phi_statistic(
        spectrum.lambdas[static_cast<std::size_t>(j - 1)], t_len, test.kappa);
    const RandTestResult result =
        run_hypothesis(test, phi_log, RankAlgorithm::TopDown, j);
    estimate.trail.push_back(to_step(result));
    if (!result.reject) {
      estimate.m_hat = j;
      break;
    }
  }
  return estimate;
}

RankEstimate estimate_rank(RankAlgorithm algorithm,
                           const EigenSpectrum& spectrum, double t_len,
                           const RandTestConfig& config,
                           const LevelSchedule& schedule) {
  return algorithm == RankAlgorithm::BottomUp
             ? estimate_bottom_up(spectrum, t_len, config, schedule)
             : estimate_top_down(spectrum, t_len, config, schedule);
}

}  // namespace trendrank
