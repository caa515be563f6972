#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bayescp {

// Base of every error thrown by the library. Callers that only want to
// distinguish "bad input" from "numerical trouble" can catch the
// intermediate classes below.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Inconsistent or out-of-range configuration (bounds, k_max, sample counts).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// An argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// A window [begin, end) that does not fit the sequence.
class WindowError : public DomainError {
 public:
  using DomainError::DomainError;
};

class InsufficientData : public Error {
 public:
  using Error::Error;
};

class DegenerateVariance : public Error {
 public:
  using Error::Error;
};

// The model assigns zero probability to every admissible configuration.
class ModelError : public Error {
 public:
  using Error::Error;
};

class IngestError : public Error {
 public:
  IngestError(const std::string& what, std::size_t line = 0);

  // 1-based line of the offending input row; 0 when not line-specific.
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class OracleScaleError : public Error {
 public:
  using Error::Error;
};

class OracleNumericsError : public Error {
 public:
  using Error::Error;
};

}  // namespace bayescp
