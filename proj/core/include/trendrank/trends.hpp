#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "trendrank/panel.hpp"
#include "trendrank/spectra.hpp"

namespace trendrank {

/// Principal-component split of a panel into m common trends and residuals:
/// values(ordering, :) = loadings * trends + residuals, exactly.
///
/// Before identification the loadings columns are orthonormal eigenvectors
/// of s11 with a fixed sign convention. identify() rescales so that the
/// first m rows (in the chosen series ordering) become the identity block;
/// rows of loadings/residuals and series_names are stored in that ordering.
struct TrendDecomposition {
  Eigen::MatrixXd loadings;   // N x m
  Eigen::MatrixXd trends;     // m x T
  Eigen::MatrixXd rotation;   // m x m transform applied for identification
  Eigen::MatrixXd residuals;  // N x T
  bool identified = false;
  std::vector<int> ordering;  // row i holds input series ordering[i] (0-based)
  std::vector<std::string> series_names;  // aligned with loadings rows
};

/// Loadings are the eigenvectors of mp.s11 for its m largest eigenvalues,
/// trends are their projections loadings' * values. Sign convention: the
/// entry of largest magnitude in each eigenvector is positive (ties break
/// to the lowest index), which makes the output reproducible.
TrendDecomposition pc_decompose(const TimeSeriesPanel& panel, int m,
                                const MomentPair& mp);

/// Reorders series by `ordering` (a 0-based permutation of 0..N-1) and
/// rescales so the leading m x m loading block is the identity:
/// loadings -> loadings * B^-1, trends -> B * trends, with B the leading
/// block. The fitted values loadings * trends are unchanged. Throws
/// Error("SingularBlock") when the block is numerically singular, which
/// signals a bad choice of ordering.
TrendDecomposition identify(const TrendDecomposition& dec,
                            const std::vector<int>& ordering);

}  // namespace trendrank
