#pragma once

#include <stdexcept>
#include <string>

namespace dqlie {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Division by a dual quaternion (or dual number) with zero primary part.
class NonInvertibleError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the domain of an operation (e.g. an oversized perturbation).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A value that must satisfy an invariant (unit norm, symmetry, ...) does not.
class InvariantError : public Error {
 public:
  using Error::Error;
};

/// Robot geometry is degenerate at the requested pose.
class GeometryError : public Error {
 public:
  using Error::Error;
};

/// The actuator Jacobian is singular or too badly conditioned to invert.
class SingularityError : public Error {
 public:
  using Error::Error;
};

/// Two Lie jets evaluated at different points were combined.
class ContextMismatchError : public Error {
 public:
  using Error::Error;
};

/// Requested operation is not available for this model.
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file; the message names the offending field or location.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace dqlie
