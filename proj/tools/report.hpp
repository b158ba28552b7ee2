#pragma once

// Run directories, CSV/SVG emitters and the per-run JSON report.

#include <map>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace qnn::cli {

struct RunReport {
  std::string experiment;
  nlohmann::json config = nlohmann::json::object();
  std::map<std::string, double> metrics;
  std::vector<std::string> artifacts;
  std::string run_dir;
  double wall_time_s = 0.0;

  bool all_metrics_finite() const;
  nlohmann::json to_json() const;
};

/// Creates <base>/<experiment>-<UTC timestamp>[-k] and returns its path. The
/// base defaults to $QNN_OUT_DIR, then to "runs".
std::string make_run_dir(const std::string& base, const std::string& experiment);

using CsvCell = std::variant<double, std::string>;

/// Rows under a header; numbers are written with 12 significant digits.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<CsvCell>>& rows);

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

/// Plain-text SVG line chart.
void write_svg_lines(const std::string& path, const std::string& title,
                     const std::string& x_label, const std::string& y_label,
                     const std::vector<Series>& series, bool log_y = false);

struct ScatterPoint {
  double x = 0.0;
  double y = 0.0;
  int cls = 0;
};

/// Sign map of a scalar field on a regular grid with labelled points on top.
/// `field` is row-major, rows along y.
void write_svg_sign_map(const std::string& path, const std::string& title,
                        double lo, double hi, std::size_t n,
                        const std::vector<double>& field,
                        const std::vector<ScatterPoint>& points);

}  // namespace qnn::cli
