#pragma once

#include <stdexcept>
#include <string>

namespace rkdet {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes are incompatible (non-square input, mismatched sizes).
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// An input violates a documented precondition (not Hermitian, not PD, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A block or element index is outside its valid range.
class IndexError : public Error {
 public:
  using Error::Error;
};

/// A vector is not in the range of the reproducing kernel.
class OutOfRangeError : public Error {
 public:
  using Error::Error;
};

/// An object lacks a piece of configuration an operation needs.
class ConfigurationError : public Error {
 public:
  using Error::Error;
};

/// Linearly dependent input where independence is required.
class RankError : public Error {
 public:
  using Error::Error;
};

/// Random instance generation failed (e.g. PD rejection loop exhausted).
class GenerationError : public Error {
 public:
  using Error::Error;
};

/// Malformed serialized input.
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace rkdet
