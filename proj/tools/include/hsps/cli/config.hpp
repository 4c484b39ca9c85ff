// Copyright 2026 The hsps authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "hsps/simkernel.hpp"

namespace hsps::cli {

/*!
 * Resolved run configuration: the simulated scenario plus run controls.
 *
 * The text form is a sectioned key-value file ([laser], [shg], [spdc],
 * [filters], [losses], [sspd], [apd1], [apd2], [tac], [modes], [run]).
 * Units live in the key names. Missing keys keep the calibrated defaults;
 * [modes] entries left out are derived from the pump chain and filters.
 */
struct RunConfig {
  SimScenario scenario = calibrated_scenario();
  unsigned threads = 1;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

//! Parses "10ms", "250 us", "1e-3s", "50ns". A bare number is seconds.
double parse_duration(std::string_view text);

//! Throws ConfigError (line set for syntax errors, field = "section.key").
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);

//! Every field, resolved; parse_config(serialize_config(c)) == c.
std::string serialize_config(const RunConfig& c);

//! Shortest round-trip decimal form, independent of the C++ locale.
std::string format_double(double v);

}  // namespace hsps::cli
