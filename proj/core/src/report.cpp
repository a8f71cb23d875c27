#include "voxrep/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>

#include "voxrep/error.hpp"

namespace voxrep {

namespace {

constexpr const char* kUndefined = "NA";

struct Column {
  const char* name;
  const char* title;
  int decimals;
  std::optional<double> (*get)(const MetricsReport&);
};

const std::vector<Column>& columns() {
  static const std::vector<Column> cols = {
      {"avg_center_distance", "Avg Center Distance", 4, [](const MetricsReport& m) { return m.avg_center_distance; }},
      {"color_accuracy", "Color Accuracy", 2, [](const MetricsReport& m) { return m.color_accuracy; }},
      {"desc_accuracy", "Desc Accuracy", 2, [](const MetricsReport& m) { return m.desc_accuracy; }},
      {"avg_voxel_count_diff", "Avg Voxel Count Diff", 2, [](const MetricsReport& m) { return m.avg_voxel_count_diff; }},
      {"avg_mismatch_per_example", "Avg Mismatch Per Example", 2,
       [](const MetricsReport& m) { return std::optional<double>(m.avg_mismatch_per_example); }},
  };
  return cols;
}

std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) {
    if (!cell.empty() && cell.back() == '\r') cell.pop_back();
    out.push_back(cell);
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::optional<double> parse_cell(const std::string& cell, std::size_t line) {
  if (cell == kUndefined) return std::nullopt;
  char* end = nullptr;
  const double v = std::strtod(cell.c_str(), &end);
  if (cell.empty() || *end != '\0') {
    throw Error(ErrorKind::Parse, "report line " + std::to_string(line) + ": bad number '" + cell + "'");
  }
  return v;
}

}  // namespace

const std::vector<std::string>& report_columns() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n{"steps"};
    for (const auto& c : columns()) n.emplace_back(c.name);
    return n;
  }();
  return names;
}

std::string report_table(const std::vector<ReportRow>& rows) {
  std::string out;
  for (std::size_t i = 0; i < report_columns().size(); ++i) out += (i ? "," : "") + report_columns()[i];
  out += '\n';
  for (const auto& row : rows) {
    out += row.step;
    for (const auto& c : columns()) {
      const auto v = c.get(row.metrics);
      out += ',';
      out += v ? fixed(*v, c.decimals) : kUndefined;
    }
    out += '\n';
  }
  return out;
}

std::vector<ReportRow> parse_report_table(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  std::size_t number = 0;
  std::vector<ReportRow> rows;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (!header_seen) {
      if (cells != report_columns()) throw Error(ErrorKind::Format, "unexpected report header: " + line);
      header_seen = true;
      continue;
    }
    if (cells.size() != report_columns().size()) {
      throw Error(ErrorKind::Format, "report line " + std::to_string(number) + " has " + std::to_string(cells.size()) +
                                         " cells");
    }
    ReportRow row;
    row.step = cells[0];
    MetricsReport& m = row.metrics;
    m.avg_center_distance = parse_cell(cells[1], number);
    m.color_accuracy = parse_cell(cells[2], number);
    m.desc_accuracy = parse_cell(cells[3], number);
    m.avg_voxel_count_diff = parse_cell(cells[4], number);
    m.avg_mismatch_per_example = parse_cell(cells[5], number).value_or(std::nan(""));
    rows.push_back(std::move(row));
  }
  if (!header_seen) throw Error(ErrorKind::Format, "report has no header");
  return rows;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::map<std::string, std::string> render_charts(const std::vector<ReportRow>& rows) {
  if (rows.size() < 2) throw Error(ErrorKind::InsufficientData, "a line chart needs at least two rows");

  // Numeric steps give a proportional x axis; otherwise rows are spaced evenly.
  std::vector<double> xs;
  bool numeric = true;
  for (const auto& row : rows) {
    char* end = nullptr;
    const double v = std::strtod(row.step.c_str(), &end);
    if (row.step.empty() || *end != '\0') numeric = false;
    xs.push_back(v);
  }
  if (!numeric) {
    for (std::size_t i = 0; i < rows.size(); ++i) xs[i] = static_cast<double>(i);
  }

  constexpr double kWidth = 640, kHeight = 400, kLeft = 70, kRight = 20, kTop = 40, kBottom = 50;
  const double x_min = *std::min_element(xs.begin(), xs.end());
  const double x_max = *std::max_element(xs.begin(), xs.end());
  const auto px = [&](double x) {
    return x_max > x_min ? kLeft + (x - x_min) / (x_max - x_min) * (kWidth - kLeft - kRight) : kLeft;
  };

  std::map<std::string, std::string> charts;
  for (const auto& c : columns()) {
    std::vector<std::pair<double, double>> points;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto v = c.get(rows[i].metrics);
      if (v && std::isfinite(*v)) points.emplace_back(xs[i], *v);
    }
    double y_min = 0.0, y_max = 1.0;
    if (!points.empty()) {
      y_min = std::min(0.0, std::min_element(points.begin(), points.end(), [](auto a, auto b) { return a.second < b.second; })->second);
      y_max = std::max_element(points.begin(), points.end(), [](auto a, auto b) { return a.second < b.second; })->second;
      if (y_max <= y_min) y_max = y_min + 1.0;
    }
    const auto py = [&](double y) { return kTop + (y_max - y) / (y_max - y_min) * (kHeight - kTop - kBottom); };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
        << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
    svg << "<!-- matching: global greedy by center distance; pair metrics pooled over all matched pairs -->\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">"
        << c.title << "</text>\n";
    svg << "<line x1=\"" << kLeft << "\" y1=\"" << kHeight - kBottom << "\" x2=\"" << kWidth - kRight << "\" y2=\""
        << kHeight - kBottom << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\"" << kHeight - kBottom
        << "\" stroke=\"black\"/>\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
      svg << "<text x=\"" << fixed(px(xs[i]), 2) << "\" y=\"" << kHeight - kBottom + 18
          << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">" << rows[i].step << "</text>\n";
    }
    for (double frac : {0.0, 0.5, 1.0}) {
      const double v = y_min + frac * (y_max - y_min);
      svg << "<text x=\"" << kLeft - 6 << "\" y=\"" << fixed(py(v) + 4, 2)
          << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">" << fixed(v, c.decimals) << "</text>\n";
    }
    svg << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 10
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">Steps</text>\n";
    svg << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < points.size(); ++i) {
      svg << (i ? " " : "") << fixed(px(points[i].first), 2) << ',' << fixed(py(points[i].second), 2);
    }
    svg << "\"/>\n";
    for (const auto& [x, y] : points) {
      svg << "<circle class=\"point\" cx=\"" << fixed(px(x), 2) << "\" cy=\"" << fixed(py(y), 2)
          << "\" r=\"3\" fill=\"steelblue\"/>\n";
    }
    svg << "</svg>\n";
    charts[c.name] = svg.str();
  }
  return charts;
}

std::vector<std::filesystem::path> write_charts(const std::vector<ReportRow>& rows, const std::filesystem::path& dir) {
  const auto charts = render_charts(rows);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::Io, "cannot create " + dir.string() + ": " + ec.message());
  std::vector<std::filesystem::path> paths;
  for (const auto& c : columns()) {
    const auto path = dir / (std::string(c.name) + ".svg");
    write_text(path, charts.at(c.name));
    paths.push_back(path);
  }
  return paths;
}

}  // namespace voxrep
