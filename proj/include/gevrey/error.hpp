#pragma once

#include <stdexcept>
#include <string>

namespace gevrey {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter violates a documented invariant (grid size, weight exponent,
/// multi-index order, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A field carries too much mass near the box boundary to stand in for a
/// decaying whole-space function.
class BoundaryShellViolation : public Error {
 public:
  BoundaryShellViolation(double fraction, double tolerance);
  double fraction() const { return fraction_; }

 private:
  double fraction_;
};

/// Non-finite values, blow-up guard, or a degenerate numerical state.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace gevrey
