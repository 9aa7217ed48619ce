#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "trendrank/quadrature.hpp"
#include "trendrank/rng.hpp"

namespace trendrank {

/// Randomised test of "the j-th largest pencil eigenvalue diverges".
///
/// The raw statistic phi = exp(T^-kappa * lambda_j) - 1 overflows doubles for
/// any strongly trending data, so phi is carried in log domain:
/// phi_log = log(1 + phi) = T^-kappa * lambda_j. The test only ever compares
/// phi * xi against thresholds u, which is exactly computable from phi_log.
struct RandTestConfig {
  double kappa = 1e-4;  // exponent in T^-kappa, in (0, 1]
  int m_draws = 100;    // artificial sample size M
  QuadratureSpec quadrature = QuadratureSpec::gh2();
  double alpha = 0.05;  // per-test level
  int s_reps = 1;       // strong-rule repetitions; 1 = single shot
  std::uint64_t seed = 0;

  void validate() const;  // throws Error on out-of-range fields
};

struct RandTestResult {
  int j = 0;             // hypothesis index, filled by the caller
  double phi_log = 0.0;  // log(1 + phi)
  std::vector<double> theta_by_node;
  double theta_big = 0.0;  // weighted sum of squared node statistics
  double c_alpha = 0.0;    // chi-square(1) quantile at 1 - alpha
  bool reject = false;
  std::optional<double> q_strong;          // acceptance fraction, s_reps > 1
  std::optional<double> strong_threshold;  // LIL threshold, s_reps > 1
};

/// Beyond this value of phi_log, exp overflows and the indicator
/// I(phi * xi <= u) degenerates to I(xi <= 0) for every finite u.
inline constexpr double kSaturationLog = 700.0;

/// phi_log = T^-kappa * lambda_j. Requires lambda_j >= 0, t_len > 0 and
/// kappa in (0, 1].
double phi_statistic(double lambda_j, double t_len, double kappa);

/// Node statistic theta(u) = (2/sqrt(M)) * sum_i (I(phi xi_i <= u) - 1/2)
/// over the artificial draws xi. phi_log = 0 makes the indicator I(0 <= u);
/// a saturated phi_log makes it I(xi_i <= 0).
double theta_small(double phi_log, double u, std::span<const double> xi);

/// One repetition: draws a single artificial sample of size M from the
/// stream, shares it across all quadrature nodes, and rejects when the
/// weighted sum of squared node statistics exceeds the chi-square(1)
/// quantile at 1 - alpha.
///
/// When phi_log is saturated every node statistic collapses to the same
/// function of the draw signs, so only the count of nonpositive draws is
/// sampled (binomial_half) - the law of the result is unchanged.
RandTestResult theta_big(const RandTestConfig& config, double phi_log,
                         RngStream& stream);

/// Acceptance threshold (1-alpha) - sqrt(alpha(1-alpha)) sqrt(2 lnln(S)/S)
/// with the iterated log truncated at zero.
double strong_rule_threshold(std::int64_t s_reps, double alpha);

/// Runs theta_big config.s_reps times on substreams derived from
/// stream_root (substream s uses derive_seed(stream_root, {s})), computes
/// the fraction Q of repetitions that accept, and accepts overall when
/// Q >= strong_rule_threshold. Repetitions are order-independent and can be
/// recomputed in isolation.
RandTestResult strong_rule(const RandTestConfig& config, double phi_log,
                           std::uint64_t stream_root);

}  // namespace trendrank
