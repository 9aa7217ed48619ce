#pragma once

#include <Eigen/Dense>
#include <vector>

#include "trendrank/panel.hpp"

namespace trendrank {

/// Second-moment pair of a panel: s11 accumulates levels over t = 1..T,
/// s00 accumulates first differences over t = 2..T. Both are symmetric PSD.
struct MomentPair {
  Eigen::MatrixXd s11;  // sum_t y_t y_t'
  Eigen::MatrixXd s00;  // sum_t (y_t - y_{t-1})(y_t - y_{t-1})'
  Eigen::Index t_used_levels = 0;  // = T
  Eigen::Index t_used_diffs = 0;   // = T - 1
};

MomentPair moment_matrices(const TimeSeriesPanel& panel);

/// Eigenvalues of s00^{-1} s11, sorted descending. Computed through the
/// symmetric similarity s00^{-1/2} s11 s00^{-1/2}, which has the same
/// spectrum with a guaranteed real, nonnegative result.
struct EigenSpectrum {
  std::vector<double> lambdas;  // length N, descending, >= 0
  double cond_s00 = 0.0;        // max/min eigenvalue of s00 (+ ridge)
};

/// Throws Error("SingularS00") when the smallest eigenvalue of
/// s00 + ridge*I is at or below N * eps * trace(s00); beyond that point the
/// small directions of the pencil carry no double-precision information.
/// The ridge defaults to zero: regularisation changes the statistic, so it
/// is applied only on explicit request.
EigenSpectrum relative_spectrum(const MomentPair& mp, double ridge = 0.0);

}  // namespace trendrank
