#pragma once

#include <span>

namespace trendrank {

/// Tail-index estimate from the k largest order statistics of |x|.
struct TailEstimate {
  double eta_hat = 0.0;
  int k_used = 0;
  double ci_low = 0.0;   // eta_hat * (1 - 1.96/sqrt(k))
  double ci_high = 0.0;  // eta_hat * (1 + 1.96/sqrt(k))
};

/// Hill estimator on absolute values:
/// eta_hat = [ k^-1 sum_{i=1..k} ln( X_(n-i+1) / X_(n-k) ) ]^-1
/// over the order statistics of |x| with zeros dropped. Needs k >= 2 and at
/// least k+1 nonzero observations with a nonzero log spread, otherwise
/// throws Error("InsufficientTail"). Permuting the input cannot change the
/// result; scaling it leaves the ratios untouched.
TailEstimate hill_estimator(std::span<const double> sample, int k);

/// Default order-statistic count: round(sqrt(n)).
int default_hill_k(std::size_t n);

}  // namespace trendrank
