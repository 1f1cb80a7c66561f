#pragma once

#include <stdexcept>
#include <string>

namespace reprind {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: bad syntax, unresolved names, ill-shaped values.
class InputError : public Error {
 public:
  using Error::Error;
};

/// Two objects that must live over the same carrier do not.
class CarrierMismatch : public Error {
 public:
  using Error::Error;
};

/// An enumeration would exceed the configured size bound.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

/// A checked property of the input does not hold (not structured, not a
/// QER, an axiom fails where it must hold).
class VerdictFailure : public Error {
 public:
  using Error::Error;
};

/// An internal verification failed. Reaching one of these is a bug.
class SoundnessError : public Error {
 public:
  using Error::Error;
};

}  // namespace reprind
