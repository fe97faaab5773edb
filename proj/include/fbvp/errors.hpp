#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fbvp {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad user input: invalid counts, malformed expressions, coefficient
/// invariants that do not hold. The CLI maps this family to exit status 1.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class SyntaxError : public ConfigError {
 public:
  SyntaxError(std::size_t offset, const std::string& message)
      : ConfigError("syntax error at offset " + std::to_string(offset) + ": " + message),
        offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

class UnknownIdentifierError : public ConfigError {
 public:
  explicit UnknownIdentifierError(std::string name)
      : ConfigError("unknown identifier '" + name + "'"), name_(std::move(name)) {}
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

class ArityError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class AssemblyError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// Failures of the numerics themselves. The CLI maps this family to exit
/// status 2.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// ln of a non-positive number, sqrt of a negative one, division by zero, or
/// any other operation whose IEEE result would be NaN or infinite.
class EvalDomainError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// A point handed to field evaluation lies outside the closed outer disk.
class DomainViolationError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class SolverError : public NumericalError {
 public:
  SolverError(const std::string& message, double residual)
      : NumericalError(message), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// Discrete maximum principle or cone membership broken beyond tolerance.
class SchemeError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class DegenerateOperatorError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Diagnostics of the last iterate are carried so callers can report them.
class NonConvergenceError : public NumericalError {
 public:
  NonConvergenceError(const std::string& message, int iterations, double last_step,
                      double last_lambda)
      : NumericalError(message),
        iterations_(iterations),
        last_step_(last_step),
        last_lambda_(last_lambda) {}
  int iterations() const noexcept { return iterations_; }
  double last_step() const noexcept { return last_step_; }
  double last_lambda() const noexcept { return last_lambda_; }

 private:
  int iterations_;
  double last_step_;
  double last_lambda_;
};

}  // namespace fbvp
