// SPDX-FileCopyrightText: Copyright (c) 2026 The alto-sim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace alto {

// Root of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An argument lies outside the domain of a model function.
class DomainError : public Error {
 public:
  using Error::Error;
};

// A link with zero rate cannot carry the requested bits.
class UnreachableLinkError : public Error {
 public:
  using Error::Error;
};

// No CPU was allocated to the task.
class NoResourceError : public Error {
 public:
  using Error::Error;
};

// Calls arrived out of the select/observe order a policy expects.
class SequencingError : public Error {
 public:
  using Error::Error;
};

// The environment broke its contract with the policy (e.g. empty candidate set).
class EnvironmentError : public Error {
 public:
  using Error::Error;
};

// Bad input to a metric, such as an observation from an epoch the oracle does not cover.
class InputError : public Error {
 public:
  using Error::Error;
};

// A Monte-Carlo estimate was requested with too few samples.
class PrecisionError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  ConfigError(const std::string& field, const std::string& message, int line = -1)
      : Error(format(field, message, line)), field_(field), line_(line) {}

  const std::string& field() const noexcept { return field_; }
  // 1-based line in the config file, or -1 when unknown.
  int line() const noexcept { return line_; }

 private:
  static std::string format(const std::string& field, const std::string& message, int line) {
    std::string out = "config error";
    if (line > 0) out += " at line " + std::to_string(line);
    if (!field.empty()) out += " (" + field + ")";
    return out + ": " + message;
  }

  std::string field_;
  int line_;
};

}  // namespace alto
