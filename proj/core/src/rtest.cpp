#include "trendrank/rtest.hpp"

#include <cmath>
#include <string>

#include "trendrank/errors.hpp"
#include "trendrank/stats.hpp"

namespace trendrank {

void RandTestConfig::validate() const {
  if (!(kappa > 0.0 && kappa <= 1.0)) {
    throw input_error("InvalidLevel", "kappa must be in (0, 1]");
  }
  if (m_draws < 1) {
    throw input_error("InvalidLevel", "m_draws must be positive");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw input_error("InvalidLevel", "alpha must be in (0, 1)");
  }
  if (s_reps < 1) {
    throw input_error("InvalidLevel", "s_reps must be positive");
  }
  if (quadrature.nodes.empty()) {
    throw input_error("InvalidQuadrature", "quadrature has no nodes");
  }
}

double phi_statistic(double lambda_j, double t_len, double kappa) {
  if (lambda_j < 0.0) {
    throw numerical_error("NegativeEigenvalue",
                          "eigenvalue " + std::to_string(lambda_j) +
                              " is negative after clamping");
  }
  if (!(t_len > 0.0)) {
    throw input_error("TooShort", "t_len must be positive");
  }
  if (!(kappa > 0.0 && kappa <= 1.0)) {
    throw input_error("InvalidLevel", "kappa must be in (0, 1]");
  }
  return std::exp(-kappa * std::log(t_len)) * lambda_j;
}

double theta_small(double phi_log, double u, std::span<const double> xi) {
  const std::size_t m = xi.size();
  double centered_sum = 0.0;
  if (phi_log == 0.0) {
    // phi = 0: the indicator no longer depends on the draws.
    centered_sum = (0.0 <= u) ? 0.5 * static_cast<double>(m)
                              : -0.5 * static_cast<double>(m);
  } else if (phi_log > kSaturationLog) {
    for (double x : xi) centered_sum += (x <= 0.0) ? 0.5 : -0.5;
  } else {
    const double threshold = u / std::expm1(phi_log);
    for (double x : xi) centered_sum += (x <= threshold) ? 0.5 : -0.5;
  }
  return 2.0 / std::sqrt(static_cast<double>(m)) * centered_sum;
}

RandTestResult theta_big(const RandTestConfig& config, double phi_log,
                         RngStream& stream) {
  config.validate();
  const int m = config.m_draws;

  RandTestResult result;
  result.phi_log = phi_log;
  result.c_alpha = chi2_quantile_upper_1df(config.alpha);
  result.theta_by_node.reserve(config.quadrature.nodes.size());

  if (phi_log > kSaturationLog) {
    // Every node sees the same indicator I(xi_i <= 0); only the count of
    // nonpositive draws matters, and binomial_half has exactly its law.
    const auto count = stream.binomial_half(m);
    const double theta =
        2.0 / std::sqrt(static_cast<double>(m)) *
        (static_cast<double>(count) - 0.5 * static_cast<double>(m));
    double total = 0.0;
    for (const auto& node : config.quadrature.nodes) {
      result.theta_by_node.push_back(theta);
      total += node.weight * theta * theta;
    }
    result.theta_big = total;
  } else {
    std::vector<double> xi(static_cast<std::size_t>(m));
    for (double& x : xi) x = stream.normal();
    double total = 0.0;
    for (const auto& node : config.quadrature.nodes) {
      const double theta = theta_small(phi_log, node.u, xi);
      result.theta_by_node.push_back(theta);
      total += node.weight * theta * theta;
    }
    result.theta_big = total;
  }

  result.reject = result.theta_big > result.c_alpha;
  return result;
}

double strong_rule_threshold(std::int64_t s_reps, double alpha) {
  if (s_reps < 2) {
    throw input_error("InvalidLevel", "strong rule needs s_reps >= 2");
  }
  const double s = static_cast<double>(s_reps);
  const double lnln = std::max(std::log(std::log(s)), 0.0);
  return (1.0 - alpha) -
         std::sqrt(alpha * (1.0 - alpha)) * std::sqrt(2.0 * lnln / s);
}

RandTestResult strong_rule(const RandTestConfig& config, double phi_log,
                           std::uint64_t stream_root) {
  config.validate();
  if (config.s_reps < 2) {
    throw input_error("InvalidLevel", "strong rule needs s_reps >= 2");
  }

  std::int64_t accepted = 0;
  RandTestResult last;
  for (int s = 0; s < config.s_reps; ++s) {
    RngStream stream(derive_seed(stream_root, {static_cast<std::uint64_t>(s)}));
    last = theta_big(config, phi_log, stream);
    if (!last.reject) ++accepted;
  }

  RandTestResult result = last;  // keep the final repetition's node detail
  result.q_strong =
      static_cast<double>(accepted) / static_cast<double>(config.s_reps);
  result.strong_threshold = strong_rule_threshold(config.s_reps, config.alpha);
  result.reject = !(*result.q_strong >= *result.strong_threshold);
  return result;
}

}  // namespace trendrank
