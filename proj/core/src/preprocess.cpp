#include "trendrank/preprocess.hpp"

#include "trendrank/errors.hpp"

namespace trendrank {

TimeSeriesPanel log_transform(const TimeSeriesPanel& panel) {
  for (Eigen::Index i = 0; i < panel.n(); ++i) {
    for (Eigen::Index t = 0; t < panel.t(); ++t) {
      if (!(panel.values(i, t) > 0.0)) {
        throw input_error(
            "NonPositiveEntry",
            "log transform needs strictly positive values; series " +
                panel.series_names[static_cast<std::size_t>(i)] + " at t=" +
                std::to_string(t + 1) + " is " +
                std::to_string(panel.values(i, t)));
      }
    }
  }
  return make_panel(panel.values.array().log().matrix(), panel.series_names);
}

TimeSeriesPanel demean(const TimeSeriesPanel& panel) {
  Eigen::MatrixXd out = panel.values;
  out.colwise() -= panel.values.rowwise().mean();
  return make_panel(std::move(out), panel.series_names);
}

TimeSeriesPanel detrend(const TimeSeriesPanel& panel) {
  const Eigen::Index t_len = panel.t();
  if (t_len < 2) {
    throw input_error("TooShort", "detrend needs at least two observations");
  }
  Eigen::VectorXd time = Eigen::VectorXd::LinSpaced(t_len, 1.0,
                                                    static_cast<double>(t_len));
  const double t_mean = time.mean();
  const Eigen::VectorXd tc = time.array() - t_mean;
  const double denom = tc.squaredNorm();

  Eigen::MatrixXd out = panel.values;
  for (Eigen::Index i = 0; i < panel.n(); ++i) {
    const double y_mean = panel.values.row(i).mean();
    const double slope =
        (panel.values.row(i).transpose().array() - y_mean).matrix().dot(tc) /
        denom;
    const double intercept = y_mean - slope * t_mean;
    out.row(i) -= (intercept + slope * time.array()).matrix().transpose();
  }
  return make_panel(std::move(out), panel.series_names);
}

TimeSeriesPanel deviations_from_initial(const TimeSeriesPanel& panel) {
  Eigen::MatrixXd out = panel.values;
  out.colwise() -= panel.values.col(0);
  return make_panel(std::move(out), panel.series_names);
}

}  // namespace trendrank
