#pragma once

#include <stdexcept>
#include <string>

namespace indeg {

/// Base class for all library failures. The CLI maps the subclasses onto
/// distinct process exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid parameters, plans or configuration documents.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Unreadable or malformed input data, or data inconsistent with a request.
class DataError : public Error {
 public:
  using Error::Error;
};

/// Ill-conditioning, non-convergence, or a factorization failure.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace indeg
