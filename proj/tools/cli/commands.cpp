// Copyright 2026 The hsps authors.
// SPDX-License-Identifier: Apache-2.0

#include "hsps/cli/commands.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <optional>
#include <ostream>

#include <CLI11.hpp>

#include "hsps/cli/config.hpp"
#include "hsps/cli/output.hpp"
#include "hsps/error.hpp"
#include "hsps/estimator.hpp"
#include "hsps/scenario.hpp"

namespace hsps::cli {
namespace {

namespace fs = std::filesystem;

struct Common {
  std::string config_path;
  std::optional<unsigned> threads;
};

RunConfig load(const Common& c) {
  RunConfig cfg = c.config_path.empty() ? RunConfig{} : load_config(c.config_path);
  if (c.threads) cfg.threads = *c.threads;
  return cfg;
}

void add_common(CLI::App& app, Common& c) {
  app.add_option("-c,--config", c.config_path, "Scenario config file (default: built-in)");
  app.add_option("--threads", c.threads, "Worker threads (capped by HSPS_SIM_THREADS)")
      ->check(CLI::Range(1u, 4096u));
}

AnalyticDetectors analytic_detectors(const SimScenario& s) {
  return AnalyticDetectors{s.sspd.efficiency, s.apd1.efficiency, s.apd2.efficiency};
}

std::string with_sigma(const Figure& f) {
  if (!f.defined()) return "undefined (" + f.undefined_reason + ")";
  std::string s = format_double(*f.value);
  if (f.sigma != 0.0) s += " +- " + format_double(f.sigma);
  return s;
}

void print_figures(std::ostream& out, const FiguresOfMerit& f) {
  out << "R_H  = " << with_sigma(f.r_h_hz) << " Hz";
  if (f.r_h_hz.defined()) out << "  (" << format_rate(*f.r_h_hz.value) << ")";
  out << "\nS1   = " << with_sigma(f.s1_hz) << " Hz"
      << "\nS2   = " << with_sigma(f.s2_hz) << " Hz"
      << "\nP1   = " << with_sigma(f.p1) << "\ng2   = " << with_sigma(f.g2)
      << "\n<n>  = " << with_sigma(f.n_mean) << '\n';
  for (const auto& w : f.warnings) out << "warning: " << w << '\n';
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> grid;
  std::string_view rest = text;
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    auto item = rest.substr(0, comma);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (item.empty() || ec != std::errc{} || ptr != item.data() + item.size()) {
      throw ConfigError("sweep.grid", "--grid: '" + std::string(item) + "' is not a number");
    }
    grid.push_back(v);
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  return grid;
}

void write_manifest(const fs::path& dir, RunManifest m) {
  m.finished_at = utc_timestamp();
  const fs::path path = dir / "manifest.json";
  m.outputs.push_back(path);
  write_file(path, m.to_json().dump(2) + "\n");
}

//---------------------------------------------------------------------------//
struct AnalyticArgs {
  Common common;
  std::optional<double> n_mean, eta_d, gamma, laser_power_mw;
  bool json = false;
};

int cmd_analytic(const AnalyticArgs& a, std::ostream& out) {
  RunConfig cfg = load(a.common);
  SimScenario& s = cfg.scenario;
  if (a.eta_d) s.sspd.efficiency = *a.eta_d;
  if (a.gamma) s.source.gamma = *a.gamma;
  std::optional<double> n = s.modes.mu_per_mode;
  if (a.laser_power_mw) {
    s.source.laser_power_mw = *a.laser_power_mw;
    n.reset();
  }
  if (a.n_mean) n = *a.n_mean;
  if (n && *n < 0.0) throw ConfigError("n_mean", "--n-mean must be >= 0");
  validate(s.sspd, "sspd");

  const FiguresOfMerit f = analytic_figures(s.source, analytic_detectors(s), n);
  if (a.json) {
    out << figures_json(f).dump(2) << '\n';
  } else {
    print_figures(out, f);
  }
  return kOk;
}

//---------------------------------------------------------------------------//
struct SimulateArgs {
  Common common;
  std::string duration;
  std::optional<std::uint64_t> seed;
  std::string out_dir = "hsps-out";
  std::string modes = "multi";
};

int cmd_simulate(const SimulateArgs& a, std::ostream& out) {
  const std::string started = utc_timestamp();
  RunConfig cfg = load(a.common);
  SimScenario& s = cfg.scenario;
  if (!a.duration.empty()) s.duration_s = parse_duration(a.duration);
  if (a.seed) s.seed = *a.seed;
  if (a.modes == "single") {
    SimScenario single = single_mode_scenario(s.modes.mu_per_mode, s.source.statistics);
    single.duration_s = s.duration_s;
    single.seed = s.seed;
    single.block_size_pulses = s.block_size_pulses;
    s = single;
  }

  SweepRow row;
  row.set_value = s.modes.mu_per_mode;
  row.totals = run(s, cfg.threads);
  row.figures = estimate(row.totals, estimation_config_for(s));
  row.g2_theory = theory_overlay(*row.figures, s.source.statistics).g2_theory;

  const fs::path dir = a.out_dir;
  RunManifest m{"simulate", s.seed, serialize_config(cfg), started, {}, {}};
  write_file(dir / "results.csv", sweep_csv(std::span(&row, 1)));
  m.outputs.push_back(dir / "results.csv");
  nlohmann::json results{{"modes", a.modes},
                         {"figures", figures_json(*row.figures)},
                         {"totals", totals_json(row.totals)},
                         {"g2_theory", row.g2_theory}};
  write_file(dir / "results.json", results.dump(2) + "\n");
  m.outputs.push_back(dir / "results.json");
  write_manifest(dir, m);

  print_figures(out, *row.figures);
  out << "g2 single-mode theory at <n> = " << format_double(row.g2_theory) << '\n'
      << "wrote " << (dir / "results.csv").string() << '\n';
  return kOk;
}

//---------------------------------------------------------------------------//
struct SweepArgs {
  Common common;
  std::string grid;
  std::string variable = "n_mean";
  int points = 8;
  std::string duration;
  std::optional<std::uint64_t> seed;
  std::string out_dir = "hsps-out";
  bool plots = false;
};

int cmd_sweep(const SweepArgs& a, std::ostream& out) {
  const std::string started = utc_timestamp();
  RunConfig cfg = load(a.common);
  if (a.seed) cfg.scenario.seed = *a.seed;

  SweepSpec spec;
  spec.base = cfg.scenario;
  spec.variable = parse_sweep_variable(a.variable);
  spec.grid = a.grid.empty() ? default_sweep_grid(spec.base, spec.variable, a.points)
                             : parse_grid(a.grid);
  spec.duration_s = a.duration.empty() ? cfg.scenario.duration_s : parse_duration(a.duration);
  spec.threads = cfg.threads;
  const auto rows = run_sweep(spec);

  const fs::path dir = a.out_dir;
  RunManifest m{"sweep", cfg.scenario.seed, serialize_config(cfg), started, {}, {}};
  write_file(dir / "sweep.csv", sweep_csv(rows));
  m.outputs.push_back(dir / "sweep.csv");
  if (a.plots) {
    std::vector<PlotPoint> p1, g2;
    for (const auto& r : rows) {
      if (!r.figures || !r.figures->r_h_hz.defined()) continue;
      const double x = *r.figures->r_h_hz.value;
      if (r.figures->p1.defined()) p1.push_back({x, *r.figures->p1.value, r.figures->p1.sigma});
      if (r.figures->g2.defined()) g2.push_back({x, *r.figures->g2.value, r.figures->g2.sigma});
    }
    write_file(dir / "p1_vs_rh.svg", svg_plot(p1, "R_H (Hz)", "P1"));
    write_file(dir / "g2_vs_rh.svg", svg_plot(g2, "R_H (Hz)", "g2(0)"));
    m.outputs.push_back(dir / "p1_vs_rh.svg");
    m.outputs.push_back(dir / "g2_vs_rh.svg");
  }
  write_manifest(dir, m);

  std::size_t failed = 0;
  for (const auto& r : rows) {
    if (!r.error.empty()) {
      ++failed;
      out << "point " << format_double(r.set_value) << " failed: " << r.error << '\n';
    }
  }
  out << "wrote " << rows.size() << " rows (" << failed << " failed) to "
      << (dir / "sweep.csv").string() << '\n';
  return kOk;
}

//---------------------------------------------------------------------------//
struct TableArgs {
  Common common;
  std::string data;
  double eta_d = 0.90;
  double gamma = 0.80;
};

int cmd_table(const TableArgs& a, std::ostream& out) {
  const RunConfig cfg = load(a.common);
  const SimScenario& s = cfg.scenario;
  std::vector<TableRow> rows;
  try {
    rows = a.data.empty() ? load_literature_table() : load_literature_table(fs::path(a.data));
  } catch (const std::runtime_error& e) {
    if (dynamic_cast<const ConfigError*>(&e) != nullptr) throw;
    throw IoError(e.what());
  }
  const FiguresOfMerit base =
      analytic_figures(s.source, analytic_detectors(s), s.modes.mu_per_mode);
  const FiguresOfMerit projected =
      project_upgrade(base, s.sspd.efficiency, s.source.gamma, a.eta_d, a.gamma);
  rows.push_back(table_row("model", base, s.sspd.efficiency));
  rows.push_back(table_row("model, upgraded", projected, a.eta_d));
  out << comparison_table(rows)
      << "a: theoretically calculated; b: estimated from reported data; c: expected values\n";
  return kOk;
}

//---------------------------------------------------------------------------//
struct ProjectArgs {
  Common common;
  double eta_d = 0.90;
  double gamma = 0.80;
  bool json = false;
};

int cmd_project(const ProjectArgs& a, std::ostream& out) {
  const RunConfig cfg = load(a.common);
  const SimScenario& s = cfg.scenario;
  const FiguresOfMerit base =
      analytic_figures(s.source, analytic_detectors(s), s.modes.mu_per_mode);
  const FiguresOfMerit p =
      project_upgrade(base, s.sspd.efficiency, s.source.gamma, a.eta_d, a.gamma);
  if (a.json) {
    out << nlohmann::json{{"base", figures_json(base)}, {"projected", figures_json(p)}}.dump(2)
        << '\n';
    return kOk;
  }
  out << "base (eta_D = " << format_double(s.sspd.efficiency)
      << ", gamma = " << format_double(s.source.gamma) << ")\n";
  print_figures(out, base);
  out << "\nprojected (eta_D = " << format_double(a.eta_d) << ", gamma = " << format_double(a.gamma)
      << "; g2 and <n> held at base)\n";
  print_figures(out, p);
  return kOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Heralded single-photon source simulator", "hsps"};
  app.set_version_flag("--version", HSPS_VERSION);
  app.require_subcommand(1);

  AnalyticArgs an;
  auto* analytic = app.add_subcommand("analytic", "Closed-form figures of merit");
  add_common(*analytic, an.common);
  analytic->add_option("--n-mean", an.n_mean, "Mean pairs per pulse (overrides the pump chain)");
  analytic->add_option("--eta-d", an.eta_d, "Heralding detector efficiency");
  analytic->add_option("--gamma", an.gamma, "Waveguide-to-fiber coupling");
  analytic->add_option("--laser-power-mw", an.laser_power_mw, "Pump laser power (mW)");
  analytic->add_flag("--json", an.json, "Print JSON");

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo run of the full detection chain");
  add_common(*simulate, sim.common);
  simulate->add_option("--duration", sim.duration, "Simulated time, e.g. 10ms");
  simulate->add_option("--seed", sim.seed, "RNG seed");
  simulate->add_option("-o,--out", sim.out_dir, "Output directory")->capture_default_str();
  simulate->add_option("--modes", sim.modes, "multi (configured) or single (ideal single mode)")
      ->check(CLI::IsMember({"multi", "single"}))
      ->capture_default_str();

  SweepArgs sw;
  auto* sweep = app.add_subcommand("sweep", "Simulate a grid of operating points");
  add_common(*sweep, sw.common);
  sweep->add_option("--grid", sw.grid, "Comma-separated values (default: log grid over R_H)");
  sweep->add_option("--variable", sw.variable, "n_mean or laser_power_mw")
      ->check(CLI::IsMember({"n_mean", "laser_power_mw"}))
      ->capture_default_str();
  sweep->add_option("--points", sw.points, "Points of the default grid")
      ->check(CLI::Range(1, 1000))
      ->capture_default_str();
  sweep->add_option("--duration", sw.duration, "Simulated time per point, e.g. 10ms");
  sweep->add_option("--seed", sw.seed, "Seed of the first point; point i uses seed + i");
  sweep->add_option("-o,--out", sw.out_dir, "Output directory")->capture_default_str();
  sweep->add_flag("--plots", sw.plots, "Also write SVG plots of P1 and g2 against R_H");

  TableArgs tb;
  auto* table = app.add_subcommand("table", "Comparison with published sources");
  add_common(*table, tb.common);
  table->add_option("--data", tb.data, "Literature table CSV (default: bundled)");
  table->add_option("--eta-d", tb.eta_d, "Upgraded heralding detector efficiency")
      ->capture_default_str();
  table->add_option("--gamma", tb.gamma, "Upgraded coupling")->capture_default_str();

  ProjectArgs pr;
  auto* project = app.add_subcommand("project", "Figures after a detector/coupling upgrade");
  add_common(*project, pr.common);
  project->add_option("--eta-d", pr.eta_d, "Upgraded heralding detector efficiency")
      ->capture_default_str();
  project->add_option("--gamma", pr.gamma, "Upgraded coupling")->capture_default_str();
  project->add_flag("--json", pr.json, "Print JSON");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*analytic) return cmd_analytic(an, out);
    if (*simulate) return cmd_simulate(sim, out);
    if (*sweep) return cmd_sweep(sw, out);
    if (*table) return cmd_table(tb, out);
    if (*project) return cmd_project(pr, out);
  } catch (const ConfigError& e) {
    err << "config error";
    err << ": " << e.what() << '\n';
    return kConfigError;
  } catch (const DomainError& e) {
    err << "invalid input: " << e.what() << '\n';
    return kConfigError;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << '\n';
    return kIoError;
  } catch (const std::ios_base::failure& e) {
    err << "I/O error: " << e.what() << '\n';
    return kIoError;
  } catch (const InvariantError& e) {
    err << "simulation invariant violated: " << e.what() << '\n';
    return kInvariantViolation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kFailure;
}

}  // namespace hsps::cli
