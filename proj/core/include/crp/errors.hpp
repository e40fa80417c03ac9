#pragma once

#include <stdexcept>
#include <string>

namespace crp {

// Base class for everything this library throws on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operands whose shapes do not conform, or data with inconsistent shapes.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// A matrix that must be positive definite is not, even after jitter.
class SingularityError : public Error {
 public:
  using Error::Error;
};

// The requested problem has no well-defined solution (e.g. zero metric
// directions, lambda = 0 with a singular within-class scatter).
class IllPosedError : public Error {
 public:
  using Error::Error;
};

// Non-finite values or other breakdowns during computation.
class NumericalError : public Error {
 public:
  using Error::Error;
};

// Malformed input files.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Structurally valid but unusable data (empty dataset, class too small, ...).
class DataError : public Error {
 public:
  using Error::Error;
};

// Problems with experiment configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Filesystem failures, reported with path context.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace crp
