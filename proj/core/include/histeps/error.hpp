#pragma once

#include <stdexcept>
#include <string>

namespace histeps {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on arguments or hyperparameters was violated.
class ContractError : public Error {
 public:
  using Error::Error;
};

/// Tensor extents do not line up for the requested operation.
class DimensionError : public ContractError {
 public:
  using ContractError::ContractError;
};

/// A class index or coordinate is out of range.
class IndexError : public ContractError {
 public:
  using ContractError::ContractError;
};

/// NaN or Inf appeared in a value that must stay finite.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file (bad magic, truncated payload, unparsable text).
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Two inputs that must agree do not (e.g. image count vs label count).
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

/// Percentile requested on a snapshot with no positive entries.
class EmptyPercentileError : public ContractError {
 public:
  using ContractError::ContractError;
};

/// The epsilon-range estimator could not produce bounds.
class EstimationError : public Error {
 public:
  using Error::Error;
};

/// Invalid run configuration (JSON or flags).
class ConfigError : public Error {
 public:
  using Error::Error;
};

[[noreturn]] void throw_contract(const std::string& what);

}  // namespace histeps
