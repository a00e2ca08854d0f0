#pragma once

#include <optional>

#include "rlab/field.hpp"

namespace rlab {

/// How to split the coefficient L = L1 + L2 before augmenting:
/// kHermitian      L1 = (L + L^H)/2,        L2 = (L - L^H)/2
/// kZ0Shifted      L1 = z0 I - (B + B^H)/2, L2 = (B^H - B)/2
/// kCustom         caller supplies both parts
enum class SplitChoice { kHermitian, kZ0Shifted, kCustom };

/// Doubled-size reformulation that turns a non-Hermitian coefficient into a
/// Hermitian block operator: the price is twice the dimension, the reward is
/// selfadjoint spectral machinery.
struct AugmentedProblem {
  Matrix gamma1;    // base projector
  Matrix l1, l2;    // split parts, L = L1 + L2
  Matrix l0_block;  // [[L1^{-1}, -L1^{-1} L2], [L2 L1^{-1}, L1 - L2 L1^{-1} L2]]
  Matrix proj0;     // diag(Gamma2, Gamma1)
  double herm_defect = 0.0;  // max-abs asymmetry of l0_block, relative
};

/// Assembles the block operator from an explicit split.  Throws when L1 is
/// singular (its inverse anchors all four blocks).
AugmentedProblem augment(const Matrix& gamma1, const Matrix& l1,
                         const Matrix& l2);

/// Splits L = z0 I - B per the chosen rule, then augments.
AugmentedProblem augment_split(const Matrix& gamma1, const Matrix& b,
                               Complex z0, SplitChoice split);

/// Subspace inverse of proj0 * l0_block * proj0 on range(proj0): the central
/// object of the doubled problem.
Matrix h0_matrix(const AugmentedProblem& aug);

/// Same H0 recovered through the doubled resolvent at an auxiliary spectral
/// parameter z_aug; exactly independent of z_aug, which the tests exploit.
Matrix h0_via_resolvent(const AugmentedProblem& aug, Complex z_aug);

/// Relative deviation of the identity that collapses the doubled problem
/// back onto the original resolvent:
///   (z0 I - Gamma1 B Gamma1)^{-1}
///     = (0 I) H0 (-I ; L1 - L2) L1^{-1} - (Gamma1 - I)/z0.
double remarkable_identity_deviation(const Matrix& gamma1, const Matrix& b,
                                     Complex z0, SplitChoice split);
double remarkable_identity_deviation(const AugmentedProblem& aug,
                                     const Matrix& b, Complex z0);

/// The w0-parametrized family behind the Stieltjes representation:
/// L1(w0) = w0 I + M0 with M0 = c I - (B + B^H)/2 positive definite, and
/// L2 = (B^H - B)/2 fixed.  c is chosen just above the top of the Hermitian
/// part so M0 keeps a recorded coercivity margin.
struct ShiftedAugmentedFamily {
  Matrix gamma1;
  Matrix m0;
  Matrix l2;
  double c = 0.0;
  double coercivity_margin = 0.0;  // lambda_min(M0)
  double b_norm = 0.0;             // spectral norm of B, for support estimates
  Matrix proj0;

  static ShiftedAugmentedFamily from_b(const Matrix& gamma1, const Matrix& b,
                                       std::optional<double> c_override = {});

  Index base_dim() const { return gamma1.rows(); }
  Matrix l1(Complex w0) const;
  /// The w0 -> infinity limit slope: diag(Gamma2, 0).
  Matrix h1() const;
  Matrix h0(Complex w0) const;
};

struct H0Evaluation {
  Complex w0;
  Matrix h0;
  double hermitian_defect = 0.0;  // max-abs of H0 - H0^H, relative
  double hermitian_min = 0.0;     // min eig of the Hermitian part on range(proj0)
};

H0Evaluation evaluate_H0(const ShiftedAugmentedFamily& fam, Complex w0);

}  // namespace rlab
