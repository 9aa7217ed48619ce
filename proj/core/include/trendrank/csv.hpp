#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "trendrank/panel.hpp"

namespace trendrank {

/// Reads a panel from CSV: rows are time (ascending), columns are series.
/// Blank lines and lines starting with '#' are skipped; an optional single
/// header row is detected by its first cell failing to parse as a number.
/// Throws Error with codes ParseError (bad cell, with line and column),
/// RaggedRows (inconsistent column count, with line) or NonFinite.
TimeSeriesPanel read_panel_csv(std::istream& in);
TimeSeriesPanel read_panel_csv_file(const std::string& path);

/// Writes a panel as CSV with a header of series names and one row per time
/// point, at full round-trip precision (%.17g). Optional comment lines are
/// emitted first, each prefixed with "# ".
void write_panel_csv(std::ostream& out, const TimeSeriesPanel& panel,
                     const std::vector<std::string>& comments = {});

}  // namespace trendrank
