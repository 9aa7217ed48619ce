#include "trendrank/panel.hpp"

#include <cmath>

#include "trendrank/errors.hpp"

namespace trendrank {

TimeSeriesPanel make_panel(Eigen::MatrixXd values,
                           std::vector<std::string> names) {
  if (values.rows() < 1 || values.cols() < 1) {
    throw input_error("TooShort", "panel needs at least one series and one "
                                  "observation");
  }
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    for (Eigen::Index t = 0; t < values.cols(); ++t) {
      if (!std::isfinite(values(i, t))) {
        throw input_error("NonFinite",
                          "non-finite value at series " + std::to_string(i + 1) +
                              ", t=" + std::to_string(t + 1));
      }
    }
  }
  if (names.empty()) {
    names.reserve(static_cast<std::size_t>(values.rows()));
    for (Eigen::Index i = 0; i < values.rows(); ++i) {
      names.push_back("s" + std::to_string(i + 1));
    }
  } else if (static_cast<Eigen::Index>(names.size()) != values.rows()) {
    throw input_error("ParseError", "series name count does not match rows");
  }
  return TimeSeriesPanel{std::move(values), std::move(names)};
}

}  // namespace trendrank
