// Copyright 2026 The hsps authors.
// SPDX-License-Identifier: Apache-2.0

#include "hsps/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "hsps/error.hpp"
#include "hsps/parallel.hpp"

namespace hsps {
namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const auto comma = line.find(',', pos);
    out.push_back(trim(line.substr(pos, comma - pos)));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

std::string format_number(double v) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os.precision(3);
  os << v;
  return os.str();
}

TableCell number_cell(const Figure& f) {
  if (!f.defined()) return parse_cell("-");
  return TableCell{format_number(*f.value), *f.value, {}, {}};
}

}  // namespace

//---------------------------------------------------------------------------//
std::string_view to_string(SweepVariable v) {
  return v == SweepVariable::n_mean ? "n_mean" : "laser_power_mw";
}

SweepVariable parse_sweep_variable(std::string_view s) {
  if (s == "n_mean") return SweepVariable::n_mean;
  if (s == "laser_power_mw") return SweepVariable::laser_power_mw;
  throw ConfigError("sweep.variable", "unknown sweep variable '" + std::string(s) +
                    "' (expected n_mean or laser_power_mw)");
}

void validate(const SweepSpec& spec) {
  if (spec.grid.empty()) throw ConfigError("sweep.grid", "sweep grid is empty");
  for (std::size_t i = 0; i < spec.grid.size(); ++i) {
    if (!std::isfinite(spec.grid[i]) || spec.grid[i] < 0.0) {
      throw ConfigError("sweep.grid", "grid values must be finite and >= 0");
    }
    if (i > 0 && !(spec.grid[i] > spec.grid[i - 1])) {
      throw ConfigError("sweep.grid", "grid must be strictly increasing");
    }
  }
  if (!spec.seeds.empty() && spec.seeds.size() != spec.grid.size()) {
    throw ConfigError("sweep.seeds", "seed schedule must have one seed per grid point");
  }
  if (!(spec.duration_s > 0.0)) throw ConfigError("sweep.duration", "duration must be > 0");
}

SimScenario sweep_point(const SweepSpec& spec, std::size_t i) {
  SimScenario s = spec.base;
  const double v = spec.grid.at(i);
  if (spec.variable == SweepVariable::n_mean) {
    s.modes.mu_per_mode = v;
  } else {
    s.source.laser_power_mw = v;
    s.modes.mu_per_mode = source_mean_pairs(s.source);
  }
  s.duration_s = spec.duration_s;
  s.seed = spec.seeds.empty() ? spec.base.seed + i : spec.seeds[i];
  return s;
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
  validate(spec);
  const std::size_t n = spec.grid.size();
  std::vector<SweepRow> rows(n);
  const unsigned threads = worker_count(spec.threads);
  const unsigned per_point = std::max<unsigned>(1, threads / static_cast<unsigned>(n));

  parallel_for(n, std::min<unsigned>(threads, static_cast<unsigned>(n)), [&](std::size_t i) {
    SweepRow& row = rows[i];
    row.set_value = spec.grid[i];
    const auto t0 = std::chrono::steady_clock::now();
    try {
      const SimScenario s = sweep_point(spec, i);
      row.totals = run(s, per_point);
      row.figures = estimate(row.totals, estimation_config_for(s));
      row.g2_theory = theory_overlay(*row.figures, s.source.statistics).g2_theory;
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    row.runtime_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  });
  return rows;
}

std::vector<double> default_sweep_grid(const SimScenario& base, SweepVariable variable,
                                       int points, double r_h_low_hz, double r_h_high_hz) {
  if (points < 1 || !(r_h_low_hz > 0.0) || !(r_h_high_hz >= r_h_low_hz)) {
    throw DomainError("default_sweep_grid: need points >= 1 and 0 < low <= high");
  }
  const SourceConfig& src = base.source;
  std::vector<double> grid;
  grid.reserve(points);
  for (int i = 0; i < points; ++i) {
    const double frac = points == 1 ? 1.0 : static_cast<double>(i) / (points - 1);
    const double r_h = r_h_low_hz * std::pow(r_h_high_hz / r_h_low_hz, frac);
    const double n = invert_heralding_rate(r_h, src.rep_rate_hz, src.gamma,
                                           src.signal_transmission(), base.sspd.efficiency);
    if (variable == SweepVariable::n_mean) {
      grid.push_back(n);
    } else {
      const double per_mw = mean_pairs_from_pump(shg_pump(1.0, src.shg_efficiency),
                                                 src.brightness, src.heralding_bw_ghz,
                                                 src.rep_rate_hz);
      if (!(per_mw > 0.0)) throw DomainError("default_sweep_grid: pump chain yields no pairs");
      grid.push_back(n / per_mw);
    }
  }
  return grid;
}

//---------------------------------------------------------------------------//
FiguresOfMerit project_upgrade(const FiguresOfMerit& base, double base_eta_d, double base_gamma,
                               double new_eta_d, double new_gamma) {
  auto eff = [](double x) { return std::isfinite(x) && x > 0.0 && x <= 1.0; };
  if (!eff(base_eta_d) || !eff(base_gamma) || !eff(new_eta_d) || !eff(new_gamma)) {
    throw DomainError("project_upgrade: efficiencies must lie in (0, 1]");
  }
  const double detector = new_eta_d / base_eta_d;
  const double coupling = new_gamma / base_gamma;
  auto scaled = [](const Figure& f, double k) {
    if (!f.defined()) return f;
    return Figure::of(*f.value * k, f.sigma * k);
  };

  FiguresOfMerit p = base;
  p.r_h_hz = scaled(base.r_h_hz, detector * coupling);
  if (base.p1.defined()) {
    const double k = std::min(coupling, 1.0 / *base.p1.value);
    p.p1 = *base.p1.value * coupling > 1.0 ? Figure::of(1.0, 0.0) : scaled(base.p1, k);
  }
  // S1 = R_H P1 eta_1 / 2 and S2 = g2 S1^2 eta_2 / (R_H eta_1).
  const double p1_ratio =
      base.p1.defined() && *base.p1.value > 0.0 ? *p.p1.value / *base.p1.value : coupling;
  const double s1_ratio = detector * coupling * p1_ratio;
  p.s1_hz = scaled(base.s1_hz, s1_ratio);
  p.s2_hz = scaled(base.s2_hz, s1_ratio * s1_ratio / (detector * coupling));
  return p;
}

TableCell parse_cell(std::string_view text) {
  TableCell c;
  c.text = std::string(trim(text));
  std::string_view s = c.text;
  if (s.empty() || s == "-") return c;

  if (const auto caret = s.find('^'); caret != std::string_view::npos) {
    c.footnote = std::string(trim(s.substr(caret + 1)));
    s = trim(s.substr(0, caret));
  }
  for (std::string_view q : {"<~", "~", "<"}) {
    if (s.starts_with(q)) {
      c.qualifier = std::string(q);
      s = trim(s.substr(q.size()));
      break;
    }
  }
  double scale = 1.0;
  if (s.ends_with("MHz")) {
    scale = 1e6;
    s = trim(s.substr(0, s.size() - 3));
  } else if (s.ends_with("kHz")) {
    scale = 1e3;
    s = trim(s.substr(0, s.size() - 3));
  } else if (s.ends_with("Hz")) {
    s = trim(s.substr(0, s.size() - 2));
  }
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw DomainError("table cell '" + c.text + "' is not a number");
  }
  c.value = v * scale;
  return c;
}

std::filesystem::path default_table_path() {
  const std::filesystem::path installed = std::filesystem::path(HSPS_INSTALL_DATA_DIR) / "literature.csv";
  if (std::filesystem::exists(installed)) return installed;
  return std::filesystem::path(HSPS_DATA_DIR) / "literature.csv";
}

std::vector<TableRow> load_literature_table(const std::optional<std::filesystem::path>& path) {
  const auto file = path.value_or(default_table_path());
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open table data file " + file.string());

  std::vector<TableRow> rows;
  std::string line;
  bool header_seen = false;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto cells = split_commas(body);
    if (cells.size() != 6) {
      throw ConfigError("table", file.string() + ":" + std::to_string(line_no) +
                                     ": expected 6 columns", line_no);
    }
    if (!header_seen) {
      header_seen = true;
      continue;
    }
    rows.push_back(TableRow{std::string(cells[0]), parse_cell(cells[1]), parse_cell(cells[2]),
                            parse_cell(cells[3]), parse_cell(cells[4]), parse_cell(cells[5])});
  }
  return rows;
}

std::string format_rate(double hz) {
  if (hz >= 1e6) return format_number(hz / 1e6) + " MHz";
  if (hz >= 1e3) return format_number(hz / 1e3) + " kHz";
  return format_number(hz) + " Hz";
}

TableRow table_row(std::string name, const FiguresOfMerit& f, double eta_d) {
  TableRow row;
  row.name = std::move(name);
  row.p1 = number_cell(f.p1);
  row.eta_d = TableCell{format_number(eta_d), eta_d, {}, {}};
  row.r_h = f.r_h_hz.defined() ? TableCell{format_rate(*f.r_h_hz.value), *f.r_h_hz.value, {}, {}}
                               : parse_cell("-");
  row.n_mean = number_cell(f.n_mean);
  row.g2 = number_cell(f.g2);
  return row;
}

std::string comparison_table(std::span<const TableRow> rows) {
  const std::vector<std::string> header{"", "P1", "eta_D", "R_H", "<n>", "g2(0)"};
  std::vector<std::vector<std::string>> cells{header};
  for (const auto& r : rows) {
    auto text = [](const TableCell& c) { return c.text.empty() ? std::string("-") : c.text; };
    cells.push_back({r.name, text(r.p1), text(r.eta_d), text(r.r_h), text(r.n_mean), text(r.g2)});
  }
  std::vector<std::size_t> width(header.size(), 0);
  for (const auto& row : cells) {
    for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
  }
  std::ostringstream os;
  auto emit = [&](const std::vector<std::string>& row) {
    os << '|';
    for (std::size_t i = 0; i < row.size(); ++i) {
      os << ' ' << row[i] << std::string(width[i] - row[i].size(), ' ') << " |";
    }
    os << '\n';
  };
  emit(cells.front());
  os << '|';
  for (auto w : width) os << std::string(w + 2, '-') << '|';
  os << '\n';
  for (std::size_t i = 1; i < cells.size(); ++i) emit(cells[i]);
  return os.str();
}

}  // namespace hsps
