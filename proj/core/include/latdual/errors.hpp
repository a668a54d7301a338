#pragma once

#include <stdexcept>
#include <string>

namespace latdual {

/// Base class for all latdual errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A configurable resource cap (group order, configuration count, state-space
/// dimension, cell count) was exceeded.
struct CapExceeded : Error {
  using Error::Error;
};

/// An operation defined only for abelian groups was called on a nonabelian one.
struct NotAbelian : Error {
  using Error::Error;
};

/// Repeated class-sum diagonalization attempts failed to separate characters.
struct DiagonalizationFailed : Error {
  using Error::Error;
};

/// A lattice generator was asked for parameters that would produce loop edges
/// or faces of length < 2.
struct InvalidLattice : Error {
  using Error::Error;
};

/// The operation needs a closed surface but the input is not closed.
struct RequiresClosedSurface : Error {
  using Error::Error;
};

/// A prescribed disorder face assignment is not a coboundary; carries the
/// obstruction class description.
struct NotABoundary : Error {
  using Error::Error;
};

/// The operation needs a dual lattice that was not supplied.
struct RequiresDual : Error {
  using Error::Error;
};

/// Order insertions with representation data on a nonabelian group belong to
/// the fusion-category backends, not the plain spin sum.
struct UseTuraevViroBackend : Error {
  using Error::Error;
};

/// An Ising action vector violates the evenness constraint.
struct NotEven : Error {
  using Error::Error;
};

/// Malformed descriptor, file, or argument.
struct ParseError : Error {
  using Error::Error;
};

}  // namespace latdual
