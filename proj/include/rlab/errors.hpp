#pragma once

#include <stdexcept>
#include <string>

namespace rlab {

/// Base class for everything thrown on purpose by the laboratory.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed configuration, unknown task names, bad shapes in input files.
struct ConfigError : Error {
  using Error::Error;
};

/// A named invariant that should hold numerically was violated at runtime.
struct NumericalAssertion : Error {
  using Error::Error;
};

/// Restricted operator (near-)singular: z0 inside or too close to the spectrum,
/// condition cap exceeded, degenerate medium handed to a solver.
struct SingularOperatorError : Error {
  using Error::Error;
};

/// Dense materialization refused: dimension above the configured cap.
struct DimensionCapError : Error {
  using Error::Error;
};

}  // namespace rlab
