#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace trendrank {

/// N series observed over T time points. Rows are series, columns are time
/// (t = 1..T). Values are always finite; transforms return fresh panels and
/// never modify their input.
struct TimeSeriesPanel {
  Eigen::MatrixXd values;                 // N x T
  std::vector<std::string> series_names;  // size N

  Eigen::Index n() const { return values.rows(); }
  Eigen::Index t() const { return values.cols(); }
};

/// Validates shape (N >= 1, T >= 1) and finiteness. Missing names are filled
/// with "s1".."sN". Estimation itself needs T >= 3 (enforced where the
/// difference moments are formed), but shorter panels can be constructed,
/// ingested and transformed.
TimeSeriesPanel make_panel(Eigen::MatrixXd values,
                           std::vector<std::string> names = {});

}  // namespace trendrank
