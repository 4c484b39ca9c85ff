// Copyright 2026 The hsps authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hsps/estimator.hpp"
#include "hsps/simkernel.hpp"

namespace hsps {

//---------------------------------------------------------------------------//
// Sweeps
//---------------------------------------------------------------------------//

enum class SweepVariable { laser_power_mw, n_mean };

std::string_view to_string(SweepVariable v);
SweepVariable parse_sweep_variable(std::string_view s);

struct SweepSpec {
  SimScenario base;
  SweepVariable variable = SweepVariable::n_mean;
  //! strictly increasing
  std::vector<double> grid;
  double duration_s = 10e-3;
  //! Seed per grid point; empty means base.seed + index.
  std::vector<std::uint64_t> seeds;
  unsigned threads = 1;
};

void validate(const SweepSpec& spec);

//! The scenario simulated at grid point `i`.
SimScenario sweep_point(const SweepSpec& spec, std::size_t i);

struct SweepRow {
  double set_value = 0.0;
  std::optional<FiguresOfMerit> figures;
  CountingTotals totals;
  double g2_theory = 0.0;
  double runtime_s = 0.0;
  //! non-empty when the point failed
  std::string error;
};

/*!
 * Runs every grid point and estimates its figures.
 *
 * Points run concurrently (threads are shared out between points) and the
 * rows come back in grid order. A failing point keeps its row with `error`
 * set; the remaining points still run.
 */
std::vector<SweepRow> run_sweep(const SweepSpec& spec);

/*!
 * Log-spaced grid whose closed-form heralding rates span
 * [r_h_low_hz, r_h_high_hz], expressed in the units of `variable`.
 */
std::vector<double> default_sweep_grid(const SimScenario& base, SweepVariable variable,
                                       int points = 8, double r_h_low_hz = 50e3,
                                       double r_h_high_hz = 2.1e6);

//---------------------------------------------------------------------------//
// Projections and the comparison table
//---------------------------------------------------------------------------//

/*!
 * Figures expected after swapping the heralding detector and improving the
 * waveguide-to-fiber coupling.
 *
 * R_H scales with both efficiency ratios and P1 with the coupling ratio
 * (capped at 1). g2 and <n> are kept at their base values: the pair source
 * is unchanged, and the claim that g2 does not degrade is taken as given.
 */
FiguresOfMerit project_upgrade(const FiguresOfMerit& base, double base_eta_d,
                               double base_gamma, double new_eta_d, double new_gamma);

/// One table cell: verbatim text plus its parsed numeric value.
struct TableCell {
  std::string text;
  std::optional<double> value;
  //! "~", "<", "<~" or empty
  std::string qualifier;
  //! footnote letter, e.g. "a"
  std::string footnote;
};

//! Parses "0.18^a", "~10 kHz^b", "<0.3", "-" (rates become Hz).
TableCell parse_cell(std::string_view text);

struct TableRow {
  std::string name;
  TableCell p1, eta_d, r_h, n_mean, g2;
};

//! Bundled literature rows (read from `path`, default: the installed copy).
std::vector<TableRow> load_literature_table(
    const std::optional<std::filesystem::path>& path = std::nullopt);
std::filesystem::path default_table_path();

//! Row for simulated or analytic figures; undefined figures render as "-".
TableRow table_row(std::string name, const FiguresOfMerit& figures, double eta_d);

//! Renders the rows under the (P1, eta_D, R_H, <n>, g2(0)) header.
std::string comparison_table(std::span<const TableRow> rows);

//! "2.1 MHz", "105 kHz", "6 Hz"
std::string format_rate(double hz);

}  // namespace hsps
