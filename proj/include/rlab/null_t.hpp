#pragma once

#include <array>

#include "rlab/local_op.hpp"
#include "rlab/projector.hpp"

namespace rlab {

enum class NullTKind { kRotation2d, kAntisymDivFree3d, kElasticityTrace };

/// A translation T whose projected product P T P vanishes identically for the
/// paired projector family: adding c*T to a coefficient field never changes
/// the projected operator, which is what makes these useful as spectral
/// shifts and bound tighteners.
struct NullTOperator {
  NullTKind kind;
  LocalOperator multiplier;        // T as a pointwise block field
  FourierLocalOperator projector;  // the family it annihilates
};

/// d = 2 conductivity: constant 90-degree rotation [[0,1],[-1,0]] times amp.
NullTOperator rotation_null_t(const PeriodicGrid& grid, double amplitude = 1.0);

/// d = 3 conductivity: U(x) = eta(grad psi) with eta(u)e = u x e and
/// psi = amplitude * cos(2 pi mode.x).  On a sampled grid the pointwise
/// product aliases; wrapped matrix elements survive unless every Fourier mode
/// of psi is axis-aligned, so this constructor insists the mode has a single
/// nonzero entry (below Nyquist).
NullTOperator antisym_null_t(const PeriodicGrid& grid,
                             const std::array<int, 3>& mode,
                             double amplitude = 1.0);

/// Same construction from a caller-supplied vector field u(x) (flat, d
/// components per point).  Checks that u is curl-free on the grid and that
/// the projected product actually vanishes (aliasing-unsafe u is refused).
NullTOperator antisym_null_t_from_u(const PeriodicGrid& grid,
                                    const Vector& u_values);

/// Gradient-of-vector fields (m = d^2): T P = I tr(P) - P^T times amp.
NullTOperator elasticity_trace_null_t(const PeriodicGrid& grid,
                                      double amplitude = 1.0);

/// L + c * T pointwise.
LocalOperator shift_by_null_t(const LocalOperator& l, Complex coeff,
                              const NullTOperator& t);

/// Materialized max-abs entry of P T P, assembled column-by-column through
/// the FFT application path.
double null_t_defect(const NullTOperator& t);

}  // namespace rlab
