#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rlab/dense.hpp"
#include "rlab/local_op.hpp"
#include "rlab/projector.hpp"

namespace rlab {

/// The projected problem (z0 I - Gamma1 B Gamma1)^{-1} in its various guises.
/// gamma1 is an orthogonal projector handle, b the multiplier, z0 the
/// spectral parameter.  L = z0 I - B is the underlying coefficient operator.
struct ResolventProblem {
  OperatorHandle gamma1;
  OperatorHandle b;
  Complex z0 = 1.0;
  std::optional<ComplexField> source;  // s with Gamma1 s = s, when attached

  FieldShape shape() const { return gamma1.shape(); }
  OperatorHandle a() const { return compose(gamma1, compose(b, gamma1)); }
  OperatorHandle l() const {
    return subtract(OperatorHandle::scaled_identity(gamma1.shape(), z0), b);
  }
};

/// Validates Gamma1 s = s before attaching.
void attach_source(ResolventProblem& prob, ComplexField s, double tol = 1e-12);

enum class SolveMethod { kDense, kNeumann, kKrylov };
const char* to_string(SolveMethod m);

struct SolveOptions {
  SolveMethod method = SolveMethod::kDense;
  double tol = 1e-10;
  int max_iterations = 10000;
  /// Reference kernel for the fixed-point iteration, as the pair
  /// (Gamma, L0).  Empty means the z0 I reference, whose kernel is exactly
  /// Gamma1 / z0 and whose multiplier shift L0 - L equals B itself.
  std::optional<OperatorHandle> gamma;
  std::optional<OperatorHandle> l0;
  SubspaceInverseOptions dense{};
};

struct SolveReport {
  ComplexField e;          // the constrained field, e in range(Gamma1)
  ComplexField j;          // L e - s, lands in the annihilated complement
  int iterations = 0;
  double residual = 0.0;   // |Gamma1 (L e - s)| / |s|, recomputed post-solve
  SolveMethod method = SolveMethod::kDense;
  double e_defect = 0.0;   // |(I - Gamma1) e| / |e|
  double j_defect = 0.0;   // |Gamma1 j| / |s|
};

/// Solve for e in range(Gamma1) with Gamma1 (L e - s) = Gamma1 s residual
/// below tol.  Dense goes through the subspace inverse; neumann iterates
/// e <- Gamma s + Gamma (L0 - L) e; krylov runs conjugate gradients on the
/// normal equations of z0 I - Gamma1 B Gamma1, matrix-free.
SolveReport solve_field(const ResolventProblem& prob, const ComplexField& s,
                        const SolveOptions& opts = {});

/// Convenience: solve with the attached source.
SolveReport solve_field(const ResolventProblem& prob,
                        const SolveOptions& opts = {});

enum class ResolventVariant { kR, kR0 };

/// kR applies (z0 I - Gamma1 B Gamma1)^{-1} Gamma1; kR0 applies
/// (z0 I - Gamma1 B Gamma1)^{-1}.  They differ by (Gamma1 - I)/z0.
ComplexField resolvent_apply(const ResolventProblem& prob,
                             const ComplexField& rhs, ResolventVariant variant,
                             const SolveOptions& opts = {});

/// Worst pairwise relative Frobenius deviation between the four dense
/// materializations of the resolvent:
///   (z0 I - Gamma1 B)^{-1} Gamma1,
///   the subspace inverse of L = z0 I - B on range(Gamma1),
///   (z0 I - A)^{-1} Gamma1 with A = Gamma1 B Gamma1,
///   (z0 I - A)^{-1} + (Gamma1 - I)/z0.
double resolvent_chain_deviation(const ResolventProblem& prob,
                                 Index cap = kDenseCap);

/// One reference medium: its kernel Gamma and the constant operator L0 the
/// kernel was built from.
struct ReferencePair {
  OperatorHandle gamma;
  OperatorHandle l0;
};

/// Compares the subspace-inverse solution map against [I - Gamma (L0-L)]^{-1}
/// Gamma for every supplied reference; returns the worst relative Frobenius
/// deviation across all pairs.  The whole point: the result cannot depend on
/// which reference was chosen.
double reference_independence_check(const ResolventProblem& prob,
                                    const std::vector<ReferencePair>& references,
                                    Index cap = kDenseCap);

/// Relative deviation between the resolvent and its dual form
///   L^{-1} - L^{-1} [I/z0 - Gamma2 (I/z0 - L^{-1})]^{-1} Gamma2 L^{-1},
/// which reroutes the solve through the complementary subspace.
double duality_deviation(const ResolventProblem& prob, Index cap = kDenseCap);

/// Eigenvalue bookkeeping for the two-projection reflection: interior
/// restricted eigenvalues of Gamma1 chi Gamma1 mirror to 1 - lambda in the
/// restricted spectrum of Gamma2 chi Gamma2, while the 0/1 endpoint
/// multiplicities obey exact subspace-dimension counting.
struct ReflectionReport {
  std::vector<double> lambda1;  // restricted spectrum on range(Gamma1), sorted
  std::vector<double> lambda2;  // restricted spectrum on range(Gamma2), sorted
  double interior_max_gap = 0.0;  // elementwise mismatch of mirrored interiors
  double full_max_gap = 0.0;      // worst min-gap pairing over all of lambda1
  Index interior_count = 0;
  Index m1_zero = 0, m1_one = 0;  // endpoint multiplicities in lambda1
  Index m2_zero = 0, m2_one = 0;  // endpoint multiplicities in lambda2
  Index rank_gamma1 = 0;          // p
  Index rank_chi = 0;             // q
  Index total_dim = 0;            // n
  bool counting_law_ok = false;   // m1_zero = m2_one + (p-q), m1_one = m2_zero + (p+q-n)
  bool constant_indicator = false;
};

ReflectionReport spectrum_reflection_check(
    const std::vector<std::uint8_t>& indicator,
    const FourierLocalOperator& proj, double endpoint_tol = 1e-8);

}  // namespace rlab
