#pragma once

#include <stdexcept>
#include <string>

namespace sdrep {

/// Bad argument or configuration (non-positive tolerance, mismatched grids...).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Input violates the mathematical precondition of an operation, e.g. a
/// non-PSD field handed to the square root.
class PreconditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or unreadable file.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SizeMismatchError : public FormatError {
 public:
  using FormatError::FormatError;
};

class UnsupportedVersionError : public FormatError {
 public:
  using FormatError::FormatError;
};

}  // namespace sdrep
