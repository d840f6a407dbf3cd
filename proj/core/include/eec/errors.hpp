#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace eec {

/// A precondition on an argument was violated (bad segment count, rank < 1, ...).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Adaptive quadrature did not reach the requested tolerance.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, double achieved_tolerance)
      : std::runtime_error(what), achieved_tolerance_(achieved_tolerance) {}

  double achieved_tolerance() const noexcept { return achieved_tolerance_; }

 private:
  double achieved_tolerance_;
};

/// The chain cannot be solved as built: some transient states never reach
/// absorption, or a transient state has no exit.
class StructuralError : public std::runtime_error {
 public:
  StructuralError(const std::string& what, std::vector<std::string> states)
      : std::runtime_error(what), states_(std::move(states)) {}

  const std::vector<std::string>& offending_states() const noexcept { return states_; }

 private:
  std::vector<std::string> states_;
};

/// Scenario configuration could not be parsed or failed validation.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace eec
