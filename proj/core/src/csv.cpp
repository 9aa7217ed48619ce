#include "trendrank/csv.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "trendrank/errors.hpp"

namespace trendrank {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(trim(field));
  if (!line.empty() && line.back() == ',') fields.push_back("");
  return fields;
}

bool parse_number(const std::string& text, double& value) {
  if (text.empty()) return false;
  const char* begin = text.c_str();
  char* end = nullptr;
  value = std::strtod(begin, &end);
  return end == begin + text.size();
}

}  // namespace

TimeSeriesPanel read_panel_csv(std::istream& in) {
  std::vector<std::string> names;
  std::vector<std::vector<double>> rows;
  std::size_t n_cols = 0;
  bool saw_first_row = false;

  std::string line;
  long line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;

    const std::vector<std::string> fields = split_fields(stripped);
    if (!saw_first_row) {
      saw_first_row = true;
      n_cols = fields.size();
      double probe = 0.0;
      if (!parse_number(fields[0], probe)) {
        names = fields;  // header row
        continue;
      }
    }
    if (fields.size() != n_cols) {
      throw input_error("RaggedRows",
                        "line " + std::to_string(line_number) + " has " +
                            std::to_string(fields.size()) + " fields, expected " +
                            std::to_string(n_cols));
    }
    std::vector<double> row(n_cols);
    for (std::size_t c = 0; c < n_cols; ++c) {
      double value = 0.0;
      if (!parse_number(fields[c], value)) {
        throw input_error("ParseError",
                          "cannot parse '" + fields[c] + "' at line " +
                              std::to_string(line_number) + ", column " +
                              std::to_string(c + 1));
      }
      if (!std::isfinite(value)) {
        throw input_error("NonFinite",
                          "non-finite value at line " +
                              std::to_string(line_number) + ", column " +
                              std::to_string(c + 1));
      }
      row[c] = value;
    }
    rows.push_back(std::move(row));
  }

  if (rows.empty()) {
    throw input_error("TooShort", "no data rows in CSV input");
  }
  Eigen::MatrixXd values(static_cast<Eigen::Index>(n_cols),
                         static_cast<Eigen::Index>(rows.size()));
  for (std::size_t t = 0; t < rows.size(); ++t) {
    for (std::size_t c = 0; c < n_cols; ++c) {
      values(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(t)) =
          rows[t][c];
    }
  }
  return make_panel(std::move(values), std::move(names));
}

TimeSeriesPanel read_panel_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in.is_open()) {
    throw input_error("ParseError", "cannot open '" + path + "'");
  }
  return read_panel_csv(in);
}

void write_panel_csv(std::ostream& out, const TimeSeriesPanel& panel,
                     const std::vector<std::string>& comments) {
  for (const auto& comment : comments) out << "# " << comment << "\n";
  for (Eigen::Index i = 0; i < panel.n(); ++i) {
    if (i > 0) out << ",";
    out << panel.series_names[static_cast<std::size_t>(i)];
  }
  out << "\n";
  char buf[32];
  for (Eigen::Index t = 0; t < panel.t(); ++t) {
    for (Eigen::Index i = 0; i < panel.n(); ++i) {
      std::snprintf(buf, sizeof(buf), "%.17g", panel.values(i, t));
      if (i > 0) out << ",";
      out << buf;
    }
    out << "\n";
  }
}

}  // namespace trendrank
