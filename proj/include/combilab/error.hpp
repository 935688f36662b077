#pragma once

#include <stdexcept>
#include <string>

namespace combilab {

/// Root of every error thrown by the library. The CLI maps subclasses to exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid argument or violated precondition (exit code 2).
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Malformed or invalid configuration document (exit code 2).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// An enumeration or exact computation would exceed its budget (exit code 3).
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// Numerical failure of any kind (exit code 4).
class NumericalError : public Error {
 public:
  using Error::Error;
};

class SingularityError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class RankError : public NumericalError {
 public:
  RankError(const std::string& what, int index) : NumericalError(what), index_(index) {}
  int index() const noexcept { return index_; }

 private:
  int index_;
};

class FitError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace combilab
