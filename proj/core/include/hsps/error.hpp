// Copyright 2026 The hsps authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace hsps {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A dead-time correction was asked for a rate the detector cannot report
/// (measured_rate * dead_time >= 1).
class SaturationError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Scenario or configuration values that fail validation. `field` names the
/// offending key ("section.key" for config files) when known.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& what, int line = 0)
      : std::runtime_error(what), field_(std::move(field)), line_(line) {}

  const std::string& field() const noexcept { return field_; }
  int line() const noexcept { return line_; }

 private:
  std::string field_;
  int line_;
};

/// A simulation produced totals that break a counting invariant.
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace hsps
