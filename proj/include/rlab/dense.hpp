#pragma once

#include <optional>

#include "rlab/operator.hpp"

namespace rlab {

/// Largest dimension we are willing to materialize or eigensolve densely.
inline constexpr Index kDenseCap = 4096;

/// Column-by-column materialization of a handle into an explicit matrix.
/// Refuses above the cap; this is the oracle path everything else is checked
/// against, so it stays deliberately simple.
Matrix materialize(const OperatorHandle& op, Index cap = kDenseCap);

struct HermitianCheck {
  bool hermitian = false;
  double max_asymmetry = 0.0;  // max |A - A^H| entry, relative to max |A|
};
HermitianCheck hermitian_check(const Matrix& a, double rel_tol = 1e-10);

struct SpectrumInterval {
  double lo = 0.0;
  double hi = 0.0;
  enum class Kind { kExact, kOuter, kInner } kind = Kind::kExact;
};

struct SpectrumResult {
  Eigen::VectorXcd eigenvalues;  // sorted by real part, then imaginary
  bool hermitian = false;
  std::optional<SpectrumInterval> interval;  // exact hull for Hermitian input
};

/// Dense eigensolve of the materialized operator; detects Hermiticity and
/// switches to the self-adjoint solver so real spectra come out exactly real.
SpectrumResult brute_force_spectrum(const OperatorHandle& op,
                                    Index cap = kDenseCap);

/// Spectrum of Q^H M Q where Q spans range(proj): the operator restricted to
/// the subspace the projector keeps.
SpectrumResult brute_force_spectrum_restricted(const OperatorHandle& op,
                                               const OperatorHandle& proj,
                                               Index cap = kDenseCap);

struct DefinitenessReport {
  double min_eig = 0.0;  // smallest eigenvalue of the Hermitian part
  bool positive = false; // min_eig > margin
};

/// Positivity of (A + A^H)/2, with an explicit margin so "strictly positive"
/// is a number, not a convention.
DefinitenessReport hermitian_part_definite(const OperatorHandle& op,
                                           double margin = 0.0,
                                           Index cap = kDenseCap);
DefinitenessReport hermitian_part_definite(const Matrix& a, double margin = 0.0);

/// Orthonormal basis of range(P) via column-pivoted QR; rank decided by the
/// 1e-10 relative diagonal threshold.
Matrix projector_range_basis(const Matrix& p, double rel_tol = 1e-10);

struct SubspaceInverseOptions {
  double cond_cap = 1e12;
  Index cap = kDenseCap;
};

/// Inverse of proj * op * proj on range(proj), extended by zero on the
/// complement.  Throws SingularOperatorError when the restricted block is
/// ill-conditioned beyond the cap.
OperatorHandle subspace_inverse(const OperatorHandle& op,
                                const OperatorHandle& proj,
                                SubspaceInverseOptions opts = {});

/// Same computation, dense in dense out (used by hot loops that already
/// materialized).
Matrix subspace_inverse_dense(const Matrix& op, const Matrix& proj,
                              SubspaceInverseOptions opts = {});

}  // namespace rlab
