// Copyright 2026 The hsps authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hsps/scenario.hpp"

namespace hsps::cli {

//! Raised for unwritable or unreadable paths (exit code 3).
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr const char* kUndefinedCell = "undefined";
inline constexpr const char* kUnboundedCell = "unbounded";

//! Column names of the results and sweep CSV files.
const std::vector<std::string>& csv_columns();

//! CSV text for the rows, header included. Locale independent.
std::string sweep_csv(std::span<const SweepRow> rows);

nlohmann::json figures_json(const FiguresOfMerit& f);
nlohmann::json totals_json(const CountingTotals& t);

//! ISO 8601 UTC, seconds resolution.
std::string utc_timestamp();

struct RunManifest {
  std::string command;
  std::uint64_t seed = 0;
  std::string config;
  std::string started_at;
  std::string finished_at;
  std::vector<std::filesystem::path> outputs;

  nlohmann::json to_json() const;
};

/// One plotted series point with a symmetric error bar.
struct PlotPoint {
  double x = 0.0, y = 0.0, y_err = 0.0;
};

//! Scatter plot with error bars. Axes span the data extent (error bars included).
std::string svg_plot(std::span<const PlotPoint> points, const std::string& x_label,
                     const std::string& y_label);

//! Throws IoError when the file cannot be written.
void write_file(const std::filesystem::path& path, const std::string& text);

}  // namespace hsps::cli
