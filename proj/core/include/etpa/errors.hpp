#pragma once

#include <stdexcept>

namespace etpa {

/// Base class for every error raised by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A physical value or argument outside an operation's domain.
struct DomainError : Error {
  using Error::Error;
};

/// Invalid or inconsistent run configuration.
struct ConfigError : Error {
  using Error::Error;
};

/// Malformed or inconsistent dataset content.
struct DataError : Error {
  using Error::Error;
};

/// Degenerate regression design (e.g. all abscissae zero).
struct FitError : Error {
  using Error::Error;
};

/// Filesystem read/write failure.
struct IoError : Error {
  using Error::Error;
};

}  // namespace etpa
