// Copyright 2026 The hsps authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hsps::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kConfigError = 2,
  kIoError = 3,
  kInvariantViolation = 4,
};

/*!
 * Runs the `hsps` command line (args exclude the program name).
 *
 * Verbs: analytic, simulate, sweep, table, project. Output goes to `out`,
 * diagnostics to `err`; the return value is the process exit code.
 */
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hsps::cli
