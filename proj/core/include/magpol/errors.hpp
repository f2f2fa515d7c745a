#pragma once

#include <stdexcept>
#include <string>

namespace magpol {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation (e.g. B <= 0, chi > 1/2).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Missing or inconsistent configuration (parameter files, calibration, CSV input).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Caller violated an operation precondition (unsorted sweep, off-resonant input, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Input sits on a degenerate point where the requested quantity is undefined.
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

/// No exceptional point exists or is reachable for the given parameters.
class NoExceptionalPointError : public Error {
 public:
  using Error::Error;
};

/// The data cannot constrain the requested fit parameter.
class UnidentifiableError : public Error {
 public:
  using Error::Error;
};

}  // namespace magpol
