#pragma once

#include <stdexcept>
#include <string>

namespace coarse {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Non-square or ragged matrix input.
struct ShapeError : Error {
  using Error::Error;
};

// Bad arguments to a constructor or generator.
struct InvalidInputError : Error {
  using Error::Error;
};

// Operands live over different bases or different ladders.
struct IncompatibleOperandsError : Error {
  using Error::Error;
};

// Problems in config files or CLI arguments.
struct ConfigError : Error {
  using Error::Error;
};

// File IO and schema problems.
struct IoError : Error {
  using Error::Error;
};

// A pipeline precondition does not hold (e.g. a witness was requested but the
// order relation holds, so none exists).
struct PreconditionError : Error {
  using Error::Error;
};

// The ladder is too short to decide; the message carries the blocking
// statistic and, where possible, an extension estimate.
struct InconclusiveError : Error {
  using Error::Error;
};

// An internal invariant broke. Always a defect, never a user error.
struct InternalError : Error {
  using Error::Error;
};

}  // namespace coarse
