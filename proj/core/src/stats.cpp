#include "trendrank/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "trendrank/errors.hpp"

namespace trendrank {

double chi2_cdf_1df(double x) {
  if (x <= 0.0) return 0.0;
  return std::erf(std::sqrt(x / 2.0));
}

double chi2_sf_1df(double x) {
  if (x <= 0.0) return 1.0;
  return std::erfc(std::sqrt(x / 2.0));
}

double chi2_quantile_upper_1df(double tail) {
  if (!(tail > 0.0 && tail < 1.0)) {
    throw input_error("InvalidLevel",
                      "chi2 quantile needs a tail level in (0,1)");
  }
  double lo = 0.0;
  double hi = 1.0;
  while (chi2_sf_1df(hi) > tail) {
    hi *= 2.0;
    if (hi > 1e8) break;
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (chi2_sf_1df(mid) > tail) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= 1e-13 * std::max(1.0, lo)) break;
  }
  return 0.5 * (lo + hi);
}

double chi2_quantile_1df(double prob) {
  if (!(prob > 0.0 && prob < 1.0)) {
    throw input_error("InvalidLevel",
                      "chi2 quantile needs a probability in (0,1)");
  }
  return chi2_quantile_upper_1df(1.0 - prob);
}

double ks_statistic(std::vector<double> sample,
                    const std::function<double(double)>& cdf) {
  if (sample.empty()) return 0.0;
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max(d, f - static_cast<double>(i) / n);
    d = std::max(d, static_cast<double>(i + 1) / n - f);
  }
  return d;
}

namespace {

double kolmogorov_cdf(double x) {
  if (x <= 0.0) return 0.0;
  double sum = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * x * x);
    sum += sign * term;
    sign = -sign;
    if (term < 1e-18) break;
  }
  return 1.0 - 2.0 * sum;
}

}  // namespace

double kolmogorov_quantile(double prob) {
  if (!(prob > 0.0 && prob < 1.0)) {
    throw input_error("InvalidLevel",
                      "Kolmogorov quantile needs a probability in (0,1)");
  }
  double lo = 1e-3, hi = 4.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (kolmogorov_cdf(mid) < prob) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= 1e-14) break;
  }
  return 0.5 * (lo + hi);
}

}  // namespace trendrank
