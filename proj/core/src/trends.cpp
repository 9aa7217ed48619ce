#include "trendrank/trends.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "trendrank/errors.hpp"

namespace trendrank {

TrendDecomposition pc_decompose(const TimeSeriesPanel& panel, int m,
                                const MomentPair& mp) {
  const Eigen::Index n = panel.n();
  if (m < 1 || m > n) {
    throw input_error("InvalidM", "m must be in [1, N], got m=" +
                                      std::to_string(m) +
                                      " with N=" + std::to_string(n));
  }
  if (mp.s11.rows() != n) {
    throw input_error("InvalidM", "moment pair does not match the panel");
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(mp.s11);
  if (es.info() != Eigen::Success) {
    throw numerical_error("SingularS00", "eigendecomposition of s11 failed");
  }

  TrendDecomposition dec;
  dec.loadings.resize(n, m);
  // Eigen sorts ascending; take the top m in descending order.
  for (int k = 0; k < m; ++k) {
    Eigen::VectorXd v = es.eigenvectors().col(n - 1 - k);
    Eigen::Index imax = 0;
    v.cwiseAbs().maxCoeff(&imax);
    if (v(imax) < 0.0) v = -v;
    dec.loadings.col(k) = v;
  }
  dec.trends = dec.loadings.transpose() * panel.values;
  dec.residuals = panel.values - dec.loadings * dec.trends;
  dec.rotation = Eigen::MatrixXd::Identity(m, m);
  dec.identified = false;
  dec.ordering.resize(static_cast<std::size_t>(n));
  std::iota(dec.ordering.begin(), dec.ordering.end(), 0);
  dec.series_names = panel.series_names;
  return dec;
}

TrendDecomposition identify(const TrendDecomposition& dec,
                            const std::vector<int>& ordering) {
  const Eigen::Index n = dec.loadings.rows();
  const Eigen::Index m = dec.loadings.cols();
  if (static_cast<Eigen::Index>(ordering.size()) != n) {
    throw input_error("InvalidM", "ordering must be a permutation of all " +
                                      std::to_string(n) + " series");
  }
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  for (int idx : ordering) {
    if (idx < 0 || idx >= n || seen[static_cast<std::size_t>(idx)]) {
      throw input_error("InvalidM", "ordering is not a permutation");
    }
    seen[static_cast<std::size_t>(idx)] = true;
  }

  Eigen::MatrixXd perm_loadings(n, m);
  Eigen::MatrixXd perm_residuals(n, dec.residuals.cols());
  std::vector<std::string> perm_names(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    const int src = ordering[static_cast<std::size_t>(i)];
    perm_loadings.row(i) = dec.loadings.row(src);
    perm_residuals.row(i) = dec.residuals.row(src);
    perm_names[static_cast<std::size_t>(i)] =
        dec.series_names[static_cast<std::size_t>(src)];
  }

  const Eigen::MatrixXd block = perm_loadings.topRows(m);
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(block);
  const double abs_det = std::abs(lu.determinant());
  if (!(abs_det > 1e-10 * std::pow(block.norm(), static_cast<double>(m)))) {
    throw numerical_error(
        "SingularBlock",
        "leading loading block is numerically singular for this ordering");
  }

  TrendDecomposition out;
  out.loadings = perm_loadings * lu.inverse();
  out.trends = block * dec.trends;
  out.rotation = block;
  out.residuals = std::move(perm_residuals);
  out.identified = true;
  out.ordering = ordering;
  out.series_names = std::move(perm_names);
  return out;
}

}  // namespace trendrank
