#pragma once

#include <functional>
#include <vector>

namespace trendrank {

/// P(X <= x) for a chi-square variable with one degree of freedom.
double chi2_cdf_1df(double x);

/// Upper tail P(X > x); accurate for large x where 1 - cdf would cancel.
double chi2_sf_1df(double x);

/// Quantile of the chi-square(1) law: the x with P(X <= x) = prob.
/// Bisection on the tail probability, accurate to ~1e-12 relative.
double chi2_quantile_1df(double prob);

/// The x with P(X > x) = tail, taking the tail level directly so that
/// levels far below double epsilon (down to ~1e-300) keep full precision.
double chi2_quantile_upper_1df(double tail);

/// sup_x |F_n(x) - cdf(x)| for the given sample (copied and sorted inside).
double ks_statistic(std::vector<double> sample,
                    const std::function<double(double)>& cdf);

/// Asymptotic Kolmogorov quantile: the x with K(x) = prob where
/// K(x) = 1 - 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 x^2).
/// The finite-n critical value at level 1-prob is kolmogorov_quantile(prob)/sqrt(n).
double kolmogorov_quantile(double prob);

}  // namespace trendrank
