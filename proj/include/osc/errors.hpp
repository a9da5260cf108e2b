#pragma once

#include <stdexcept>
#include <string>

namespace osc {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

/// Raised when an exact computation needs a rotation R(t) whose block angles
/// λ_i·t are not all integer multiples of π/2. Callers switch to float mode.
class ExactModeUnsupportedAngle : public Error {
 public:
  using Error::Error;
};

/// The product of two ExactScalars would need a π² term.
class NonRepresentable : public Error {
 public:
  using Error::Error;
};

class MembershipUndecidable : public Error {
 public:
  using Error::Error;
};

class UnsupportedSpec : public Error {
 public:
  using Error::Error;
};

class InvalidSpec : public Error {
 public:
  using Error::Error;
};

class CertificateVerificationFailed : public Error {
 public:
  using Error::Error;
};

class ShapeMismatch : public Error {
 public:
  using Error::Error;
};

class NonFiniteState : public Error {
 public:
  using Error::Error;
};

}  // namespace osc
