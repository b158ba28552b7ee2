#include "report.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace qnn::cli {

namespace fs = std::filesystem;

bool RunReport::all_metrics_finite() const {
  return std::all_of(metrics.begin(), metrics.end(),
                     [](const auto& kv) { return std::isfinite(kv.second); });
}

nlohmann::json RunReport::to_json() const {
  nlohmann::json m = nlohmann::json::object();
  for (const auto& [k, v] : metrics) {
    if (std::isfinite(v)) {
      m[k] = v;
    } else {
      m[k] = nullptr;
    }
  }
  return {{"experiment", experiment}, {"config", config},       {"metrics", m},
          {"artifacts", artifacts},   {"run_dir", run_dir},     {"wall_time_s", wall_time_s}};
}

std::string make_run_dir(const std::string& base, const std::string& experiment) {
  std::string root = base;
  if (root.empty()) {
    const char* env = std::getenv("QNN_OUT_DIR");
    root = env && *env ? env : "runs";
  }
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y%m%dT%H%M%SZ", &tm);
  const fs::path stem = fs::path(root) / (experiment + "-" + stamp);
  fs::create_directories(root);
  fs::path dir = stem;
  for (int k = 1; !fs::create_directory(dir); ++k) dir = stem.string() + "-" + std::to_string(k);
  return dir.string();
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<CsvCell>>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << '\n';
  char buf[40];
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      out << (i ? "," : "");
      if (const double* v = std::get_if<double>(&row[i])) {
        std::snprintf(buf, sizeof buf, "%.12g", *v);
        out << buf;
      } else {
        out << std::get<std::string>(row[i]);
      }
    }
    out << '\n';
  }
}

namespace {

constexpr double kW = 640.0, kH = 420.0, kMargin = 56.0;
const char* const kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                               "#9467bd", "#8c564b", "#e377c2", "#17becf"};

std::string esc(const std::string& s) {
  std::string r;
  for (char c : s) {
    if (c == '<') {
      r += "&lt;";
    } else if (c == '>') {
      r += "&gt;";
    } else if (c == '&') {
      r += "&amp;";
    } else {
      r += c;
    }
  }
  return r;
}

void save(const std::string& path, const std::string& body) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << body;
}

}  // namespace

void write_svg_lines(const std::string& path, const std::string& title,
                     const std::string& x_label, const std::string& y_label,
                     const std::vector<Series>& series, bool log_y) {
  auto ty = [log_y](double v) { return log_y ? std::log10(std::max(v, 1e-300)) : v; };
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      x0 = std::min(x0, s.x[i]);
      x1 = std::max(x1, s.x[i]);
      y0 = std::min(y0, ty(s.y[i]));
      y1 = std::max(y1, ty(s.y[i]));
    }
  }
  if (!(x0 < x1)) x1 = x0 + 1.0;
  if (!(y0 < y1)) y1 = y0 + 1.0;
  auto px = [&](double x) { return kMargin + (x - x0) / (x1 - x0) * (kW - 2 * kMargin); };
  auto py = [&](double y) { return kH - kMargin - (ty(y) - y0) / (y1 - y0) * (kH - 2 * kMargin); };

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
    << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << kW / 2 << "\" y=\"20\" text-anchor=\"middle\">" << esc(title) << "</text>\n";
  o << "<rect x=\"" << kMargin << "\" y=\"" << kMargin << "\" width=\"" << kW - 2 * kMargin
    << "\" height=\"" << kH - 2 * kMargin << "\" fill=\"none\" stroke=\"#888\"/>\n";
  o << "<text x=\"" << kW / 2 << "\" y=\"" << kH - 12 << "\" text-anchor=\"middle\">" << esc(x_label)
    << " [" << x0 << ", " << x1 << "]</text>\n";
  o << "<text x=\"14\" y=\"" << kH / 2 << "\" transform=\"rotate(-90 14 " << kH / 2
    << ")\" text-anchor=\"middle\">" << esc(y_label) << (log_y ? " (log10)" : "") << " [" << y0
    << ", " << y1 << "]</text>\n";
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* color = kColors[k % std::size(kColors)];
    o << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      o << px(s.x[i]) << ',' << py(s.y[i]) << ' ';
    }
    o << "\"/>\n";
    o << "<text x=\"" << kW - kMargin + 4 << "\" y=\"" << kMargin + 14 * (k + 1) << "\" fill=\""
      << color << "\" font-size=\"10\">" << esc(s.name) << "</text>\n";
  }
  o << "</svg>\n";
  save(path, o.str());
}

void write_svg_sign_map(const std::string& path, const std::string& title,
                        double lo, double hi, std::size_t n,
                        const std::vector<double>& field,
                        const std::vector<ScatterPoint>& points) {
  const double side = kH - 2 * kMargin;
  const double cell = side / static_cast<double>(n);
  auto p = [&](double v) { return (v - lo) / (hi - lo) * side; };
  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << side + 2 * kMargin << "\" height=\""
    << kH << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o << "<text x=\"" << (side + 2 * kMargin) / 2 << "\" y=\"20\" text-anchor=\"middle\">" << esc(title)
    << "</text>\n<g transform=\"translate(" << kMargin << ',' << kMargin << ")\">\n";
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      const double v = field[r * n + c];
      o << "<rect x=\"" << c * cell << "\" y=\"" << side - (r + 1) * cell << "\" width=\"" << cell
        << "\" height=\"" << cell << "\" fill=\"" << (v > 0 ? "#cfe3f5" : "#f6d3d3") << "\"/>\n";
    }
  }
  for (const auto& pt : points) {
    o << "<circle cx=\"" << p(pt.x) << "\" cy=\"" << side - p(pt.y) << "\" r=\"2.5\" fill=\""
      << (pt.cls > 0 ? "#1f77b4" : "#d62728") << "\"/>\n";
  }
  o << "</g>\n</svg>\n";
  save(path, o.str());
}

}  // namespace qnn::cli
