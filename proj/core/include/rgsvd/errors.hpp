#pragma once

#include <stdexcept>
#include <string>

namespace rgsvd {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes do not conform.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A matrix that must have full rank does not (also used for GMP violations).
class RankError : public Error {
 public:
  using Error::Error;
};

/// An argument is outside the operation's domain (negative lambda, bad blocksize, ...).
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// Non-finite entries were found where finite values are required.
class FiniteError : public Error {
 public:
  using Error::Error;
};

/// File reading or writing failed, or the content is malformed.
class IoError : public Error {
 public:
  using Error::Error;
};

/// A parameter-choice rule has no admissible answer (flat curve, vanishing
/// GCV denominator).
class SelectionError : public Error {
 public:
  using Error::Error;
};

}  // namespace rgsvd
