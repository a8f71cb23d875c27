#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "voxrep/metrics.hpp"

namespace voxrep {

struct ReportRow {
  std::string step;
  MetricsReport metrics;
};

/// Column order of the results table.
const std::vector<std::string>& report_columns();

/// CSV with a fixed header; distances to 4 decimals, everything else to 2.
/// Undefined metrics are written as "NA".
std::string report_table(const std::vector<ReportRow>& rows);
std::vector<ReportRow> parse_report_table(const std::string& csv);

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

/// One SVG line chart per metric (keyed by metric column name), x = step.
/// Throws InsufficientData with fewer than two rows.
std::map<std::string, std::string> render_charts(const std::vector<ReportRow>& rows);

/// Writes `<metric>.svg` files into `dir`; returns their paths in column order.
std::vector<std::filesystem::path> write_charts(const std::vector<ReportRow>& rows, const std::filesystem::path& dir);

}  // namespace voxrep
