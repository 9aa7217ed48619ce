#pragma once

#include "trendrank/panel.hpp"

namespace trendrank {

/// Entrywise natural log. Every entry must be strictly positive.
TimeSeriesPanel log_transform(const TimeSeriesPanel& panel);

/// Subtracts each series' time mean.
TimeSeriesPanel demean(const TimeSeriesPanel& panel);

/// Subtracts the per-series least-squares fit on (1, t), t = 1..T.
/// Exact for linear trends; absorbs demeaning.
TimeSeriesPanel detrend(const TimeSeriesPanel& panel);

/// Subtracts the first observation from every column, so the transformed
/// series start at zero and increments are unchanged.
TimeSeriesPanel deviations_from_initial(const TimeSeriesPanel& panel);

}  // namespace trendrank
