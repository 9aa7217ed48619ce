#include "trendrank/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "trendrank/errors.hpp"

namespace trendrank {

TailEstimate hill_estimator(std::span<const double> sample, int k) {
  if (k < 2) {
    throw input_error("InsufficientTail", "hill estimator needs k >= 2");
  }
  std::vector<double> abs_values;
  abs_values.reserve(sample.size());
  for (double x : sample) {
    const double a = std::abs(x);
    if (a > 0.0) abs_values.push_back(a);
  }
  const std::size_t n = abs_values.size();
  if (n < static_cast<std::size_t>(k) + 1) {
    throw numerical_error("InsufficientTail",
                          "need at least k+1 nonzero observations, have " +
                              std::to_string(n));
  }
  std::sort(abs_values.begin(), abs_values.end());

  const double base = abs_values[n - static_cast<std::size_t>(k) - 1];
  double log_sum = 0.0;
  for (int i = 1; i <= k; ++i) {
    log_sum += std::log(abs_values[n - static_cast<std::size_t>(i)] / base);
  }
  if (!(log_sum > 0.0)) {
    throw numerical_error("InsufficientTail",
                          "degenerate tail: the top order statistics are all "
                          "equal");
  }

  TailEstimate est;
  est.eta_hat = static_cast<double>(k) / log_sum;
  est.k_used = k;
  const double half_width = 1.96 / std::sqrt(static_cast<double>(k));
  est.ci_low = est.eta_hat * (1.0 - half_width);
  est.ci_high = est.eta_hat * (1.0 + half_width);
  return est;
}

int default_hill_k(std::size_t n) {
  return static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
}

}  // namespace trendrank
