#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dvqe {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidReference : public Error {
 public:
  using Error::Error;
};

class IncompatibleOperator : public Error {
 public:
  using Error::Error;
};

class OracleTooLarge : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class ContractViolation : public Error {
 public:
  using Error::Error;
};

class InvalidGenerator : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class FormatError : public Error {
 public:
  using Error::Error;
};

class DegenerateVector : public Error {
 public:
  using Error::Error;
};

class DegeneracyError : public Error {
 public:
  using Error::Error;
};

class DegenerateReference : public Error {
 public:
  using Error::Error;
};

class DominantDeterminantError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class NotSpatiallyRepresentable : public Error {
 public:
  NotSpatiallyRepresentable(const std::string& what, double max_violation)
      : Error(what + " (max violation " + std::to_string(max_violation) + ")"),
        max_violation_(max_violation) {}
  double max_violation() const { return max_violation_; }

 private:
  double max_violation_;
};

/// Raised by iterative solvers; carries the residual trajectory.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, std::vector<double> history)
      : Error(what), history_(std::move(history)) {}
  const std::vector<double>& residual_history() const { return history_; }
  double last_residual() const {
    return history_.empty() ? 0.0 : history_.back();
  }

 private:
  std::vector<double> history_;
};

}  // namespace dvqe
