#include "trendrank/spectra.hpp"

#include <algorithm>
#include <limits>

#include "trendrank/errors.hpp"

namespace trendrank {

MomentPair moment_matrices(const TimeSeriesPanel& panel) {
  const Eigen::Index n = panel.n();
  const Eigen::Index t_len = panel.t();
  if (t_len < 3) {
    throw input_error("TooShort",
                      "moment matrices need T >= 3, got T=" +
                          std::to_string(t_len));
  }

  MomentPair mp;
  mp.s11 = Eigen::MatrixXd::Zero(n, n);
  mp.s11.selfadjointView<Eigen::Lower>().rankUpdate(panel.values);
  mp.s11 = mp.s11.selfadjointView<Eigen::Lower>();

  const Eigen::MatrixXd diffs =
      panel.values.rightCols(t_len - 1) - panel.values.leftCols(t_len - 1);
  mp.s00 = Eigen::MatrixXd::Zero(n, n);
  mp.s00.selfadjointView<Eigen::Lower>().rankUpdate(diffs);
  mp.s00 = mp.s00.selfadjointView<Eigen::Lower>();

  mp.t_used_levels = t_len;
  mp.t_used_diffs = t_len - 1;
  return mp;
}

EigenSpectrum relative_spectrum(const MomentPair& mp, double ridge) {
  if (!(ridge >= 0.0)) {
    throw input_error("InvalidLevel", "ridge must be nonnegative");
  }
  const Eigen::Index n = mp.s00.rows();
  Eigen::MatrixXd a = mp.s00;
  a.diagonal().array() += ridge;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es00(a);
  if (es00.info() != Eigen::Success) {
    throw numerical_error("SingularS00", "eigendecomposition of s00 failed");
  }
  const double dmin = es00.eigenvalues().minCoeff();
  const double dmax = es00.eigenvalues().maxCoeff();
  const double floor = static_cast<double>(n) *
                       std::numeric_limits<double>::epsilon() *
                       mp.s00.trace();
  if (dmin <= floor) {
    throw numerical_error(
        "SingularS00",
        "s00 is numerically singular (min eigenvalue " + std::to_string(dmin) +
            " <= " + std::to_string(floor) + "); pass a ridge to proceed");
  }

  const Eigen::MatrixXd w =
      es00.eigenvectors() *
      es00.eigenvalues().array().rsqrt().matrix().asDiagonal() *
      es00.eigenvectors().transpose();
  Eigen::MatrixXd b = w * mp.s11 * w;
  b = 0.5 * (b + b.transpose()).eval();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> esb(b);
  if (esb.info() != Eigen::Success) {
    throw numerical_error("SingularS00", "pencil eigendecomposition failed");
  }

  EigenSpectrum spec;
  spec.lambdas.resize(static_cast<std::size_t>(n));
  // Eigen returns ascending order; reverse for descending with deterministic
  // tie order.
  for (Eigen::Index i = 0; i < n; ++i) {
    spec.lambdas[static_cast<std::size_t>(i)] = esb.eigenvalues()(n - 1 - i);
  }
  // Roundoff can leave tiny negatives; the pencil is PSD by construction.
  for (double& lam : spec.lambdas) lam = std::max(lam, 0.0);
  spec.cond_s00 = dmax / dmin;
  return spec;
}

}  // namespace trendrank
