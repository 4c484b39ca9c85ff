// Copyright 2026 The hsps authors.
// SPDX-License-Identifier: Apache-2.0

#include "hsps/cli/output.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <sstream>

#include "hsps/cli/config.hpp"

namespace hsps::cli {
namespace {

std::string number(double v) {
  if (std::isinf(v)) return kUnboundedCell;
  if (std::isnan(v)) return kUndefinedCell;
  return format_double(v);
}

std::string value_cell(const Figure& f) { return f.defined() ? number(*f.value) : kUndefinedCell; }
std::string sigma_cell(const Figure& f) { return f.defined() ? number(f.sigma) : kUndefinedCell; }

std::string quoted(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

nlohmann::json figure_json(const Figure& f) {
  if (!f.defined()) return {{"value", nullptr}, {"undefined_reason", f.undefined_reason}};
  nlohmann::json j{{"value", *f.value}};
  j["sigma"] = std::isfinite(f.sigma) ? nlohmann::json(f.sigma) : nlohmann::json(kUnboundedCell);
  return j;
}

nlohmann::json origin_json(const OriginCounts& o) {
  return {{"correlated", o.correlated}, {"uncorrelated", o.uncorrelated}, {"dark", o.dark}};
}

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string tick(double v) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os.precision(3);
  os << v;
  return os.str();
}

}  // namespace

const std::vector<std::string>& csv_columns() {
  static const std::vector<std::string> cols{
      "set_value", "r_h_hz",  "r_h_err",   "p1",        "p1_err",    "g2",     "g2_err",
      "n_mean",    "g2_theory", "n_mean_err", "heralds", "s1_counts", "s2_counts", "error"};
  return cols;
}

std::string sweep_csv(std::span<const SweepRow> rows) {
  std::string out;
  for (std::size_t i = 0; i < csv_columns().size(); ++i) {
    out += (i ? "," : "") + csv_columns()[i];
  }
  out += '\n';
  for (const auto& row : rows) {
    std::vector<std::string> cells{number(row.set_value)};
    if (row.figures) {
      const auto& f = *row.figures;
      cells.insert(cells.end(), {value_cell(f.r_h_hz), sigma_cell(f.r_h_hz), value_cell(f.p1),
                                 sigma_cell(f.p1), value_cell(f.g2), sigma_cell(f.g2),
                                 value_cell(f.n_mean), number(row.g2_theory),
                                 sigma_cell(f.n_mean)});
    } else {
      cells.insert(cells.end(), 9, kUndefinedCell);
    }
    cells.push_back(std::to_string(row.totals.heralds));
    cells.push_back(std::to_string(row.totals.s1_counts));
    cells.push_back(std::to_string(row.totals.s2_counts));
    cells.push_back(quoted(row.error));
    for (std::size_t i = 0; i < cells.size(); ++i) out += (i ? "," : "") + cells[i];
    out += '\n';
  }
  return out;
}

nlohmann::json figures_json(const FiguresOfMerit& f) {
  return {{"r_h_hz", figure_json(f.r_h_hz)}, {"s1_hz", figure_json(f.s1_hz)},
          {"s2_hz", figure_json(f.s2_hz)},   {"p1", figure_json(f.p1)},
          {"g2", figure_json(f.g2)},         {"n_mean", figure_json(f.n_mean)},
          {"warnings", f.warnings}};
}

nlohmann::json totals_json(const CountingTotals& t) {
  return {{"pulses", t.pulses},
          {"heralds", t.heralds},
          {"s1_counts", t.s1_counts},
          {"s2_counts", t.s2_counts},
          {"duration_s", t.duration_s},
          {"sspd_busy_s", t.sspd_busy_s},
          {"apd1_busy_s", t.apd1_busy_s},
          {"apd2_busy_s", t.apd2_busy_s},
          {"apd1_gates", t.apd1_gates},
          {"apd2_gates", t.apd2_gates},
          {"herald_origin", origin_json(t.herald_origin)},
          {"s1_origin", origin_json(t.s1_origin)},
          {"s2_origin", origin_json(t.s2_origin)}};
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

nlohmann::json RunManifest::to_json() const {
  std::vector<std::string> paths;
  for (const auto& p : outputs) paths.push_back(p.string());
  return {{"version", HSPS_VERSION}, {"command", command},       {"seed", seed},
          {"config", config},        {"started_at", started_at}, {"finished_at", finished_at},
          {"outputs", paths}};
}

std::string svg_plot(std::span<const PlotPoint> points, const std::string& x_label,
                     const std::string& y_label) {
  constexpr double W = 640, H = 420, L = 80, R = 20, T = 20, B = 60;
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  for (const auto& p : points) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) continue;
    const double e = std::isfinite(p.y_err) ? p.y_err : 0.0;
    x0 = std::min(x0, p.x);
    x1 = std::max(x1, p.x);
    y0 = std::min(y0, p.y - e);
    y1 = std::max(y1, p.y + e);
  }
  if (!(x0 <= x1)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (x0 == x1) x0 -= 0.5, x1 += 0.5;
  if (y0 == y1) y0 -= 0.5, y1 += 0.5;
  auto sx = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
  auto sy = [&](double y) { return H - B - (y - y0) / (y1 - y0) * (H - T - B); };

  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
     << "\" data-x-min=\"" << format_double(x0) << "\" data-x-max=\"" << format_double(x1)
     << "\" data-y-min=\"" << format_double(y0) << "\" data-y-max=\"" << format_double(y1)
     << "\">\n";
  os << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << W - L - R << "\" height=\""
     << H - T - B << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double fx = x0 + (x1 - x0) * i / 4, fy = y0 + (y1 - y0) * i / 4;
    os << "<text x=\"" << sx(fx) << "\" y=\"" << H - B + 18
       << "\" text-anchor=\"middle\" font-size=\"11\">" << tick(fx) << "</text>\n";
    os << "<text x=\"" << L - 6 << "\" y=\"" << sy(fy) + 4
       << "\" text-anchor=\"end\" font-size=\"11\">" << tick(fy) << "</text>\n";
  }
  os << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 15
     << "\" text-anchor=\"middle\" font-size=\"13\">" << escape_xml(x_label) << "</text>\n";
  os << "<text x=\"15\" y=\"" << (T + H - B) / 2 << "\" text-anchor=\"middle\" font-size=\"13\""
     << " transform=\"rotate(-90 15 " << (T + H - B) / 2 << ")\">" << escape_xml(y_label)
     << "</text>\n";
  for (const auto& p : points) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) continue;
    const double e = std::isfinite(p.y_err) ? p.y_err : 0.0;
    os << "<line x1=\"" << sx(p.x) << "\" x2=\"" << sx(p.x) << "\" y1=\"" << sy(p.y - e)
       << "\" y2=\"" << sy(p.y + e) << "\" stroke=\"steelblue\"/>\n";
    os << "<circle cx=\"" << sx(p.x) << "\" cy=\"" << sy(p.y)
       << "\" r=\"4\" fill=\"steelblue\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  out.close();
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace hsps::cli
