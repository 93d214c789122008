#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ivs {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Lattice index outside the trajectory.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// Malformed argument: nonpositive scale, empty input, unknown identifier.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// A stencil on which the requested quantity is undefined (zero edge,
/// vanishing ordinate, vertical edge for the SL(2) frame).
class DegenerateStencil : public Error {
 public:
  using Error::Error;
};

/// Special-function argument outside the supported domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The fractional-linear action hit its pole.
class SingularAction : public Error {
 public:
  using Error::Error;
};

/// Input violating a stepper precondition, e.g. edges off the constraint circle.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Failure to produce seed points from an exact solution.
class InitializationError : public Error {
 public:
  using Error::Error;
};

/// Newton iteration did not converge.
class SolverFailure : public Error {
 public:
  SolverFailure(const std::string& what, double residual, int iterations)
      : Error(what), residual_(residual), iterations_(iterations) {}

  double residual() const noexcept { return residual_; }
  int iterations() const noexcept { return iterations_; }

 private:
  double residual_;
  int iterations_;
};

}  // namespace ivs
