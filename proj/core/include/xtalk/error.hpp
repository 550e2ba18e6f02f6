#pragma once

#include <stdexcept>
#include <string>

namespace xtalk {

/// Broad failure category. The CLI maps these onto its exit codes.
enum class ErrorKind {
  InvalidArgument,  // precondition violated by the caller
  Config,           // malformed or unknown configuration
  Numeric,          // degeneracy, non-convergence, tracking loss
  Io,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& what) : Error(ErrorKind::InvalidArgument, what) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(ErrorKind::Config, what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorKind::Io, what) {}
};

class NumericError : public Error {
 public:
  explicit NumericError(const std::string& what) : Error(ErrorKind::Numeric, what) {}
};

/// Covariance has an eigenvalue at or below the degeneracy threshold: the
/// channels are linearly dependent and cannot be whitened.
class RankDeficientError : public NumericError {
 public:
  using NumericError::NumericError;
};

/// Two labels resolved to the same separated component.
class IdentificationError : public NumericError {
 public:
  using NumericError::NumericError;
};

}  // namespace xtalk
