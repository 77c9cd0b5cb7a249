#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace issglf {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the set on which an operation is defined.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Target value not enclosed by the supplied bracket.
class BracketError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// A modelling assumption (A1/A2, sign conditions, ...) failed on the sampled range.
class AssumptionViolation : public Error {
 public:
  using Error::Error;
};

class SolverDiverged : public Error {
 public:
  SolverDiverged(const std::string& what, std::size_t step)
      : Error(what + " (step " + std::to_string(step) + ")"), step_(step) {}
  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

class ConfigError : public Error {
 public:
  ConfigError(const std::string& what, int line)
      : Error(line >= 0 ? "line " + std::to_string(line + 1) + ": " + what : what),
        line_(line) {}
  /// Zero-based line of the offending node, or -1 when unknown.
  int line() const noexcept { return line_; }

 private:
  int line_;
};

}  // namespace issglf
