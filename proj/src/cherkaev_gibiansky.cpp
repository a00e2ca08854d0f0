#include "rlab/cherkaev_gibiansky.hpp"

#include <cmath>

#include "rlab/dense.hpp"
#include "rlab/errors.hpp"

namespace rlab {
namespace {

Matrix block2(const Matrix& a, const Matrix& b, const Matrix& c,
              const Matrix& d) {
  const Index n = a.rows();
  Matrix out(2 * n, 2 * n);
  out.topLeftCorner(n, n) = a;
  out.topRightCorner(n, n) = b;
  out.bottomLeftCorner(n, n) = c;
  out.bottomRightCorner(n, n) = d;
  return out;
}

Matrix l0_from_split(const Matrix& l1, const Matrix& l2) {
  Eigen::FullPivLU<Matrix> lu(l1);
  if (!lu.isInvertible())
    throw SingularOperatorError(
        "augment: L1 is singular, so the block operator cannot be formed");
  const Index n = l1.rows();
  const Matrix l1i = lu.solve(Matrix::Identity(n, n));
  return block2(l1i, -l1i * l2, l2 * l1i, l1 - l2 * l1i * l2);
}

double relative_asymmetry(const Matrix& a) {
  const double scale = std::max(a.cwiseAbs().maxCoeff(), 1e-300);
  return (a - a.adjoint()).cwiseAbs().maxCoeff() / scale;
}

}  // namespace

AugmentedProblem augment(const Matrix& gamma1, const Matrix& l1,
                         const Matrix& l2) {
  const Index n = gamma1.rows();
  if (l1.rows() != n || l2.rows() != n || l1.cols() != n || l2.cols() != n)
    throw ConfigError("augment: dimension mismatch");
  AugmentedProblem aug;
  aug.gamma1 = gamma1;
  aug.l1 = l1;
  aug.l2 = l2;
  aug.l0_block = l0_from_split(l1, l2);
  const Matrix gamma2 = Matrix::Identity(n, n) - gamma1;
  aug.proj0 = block2(gamma2, Matrix::Zero(n, n), Matrix::Zero(n, n), gamma1);
  aug.herm_defect = relative_asymmetry(aug.l0_block);
  return aug;
}

AugmentedProblem augment_split(const Matrix& gamma1, const Matrix& b,
                               Complex z0, SplitChoice split) {
  const Index n = gamma1.rows();
  const Matrix l = z0 * Matrix::Identity(n, n) - b;
  Matrix l1, l2;
  switch (split) {
    case SplitChoice::kHermitian:
      l1 = (l + l.adjoint()) / 2.0;
      l2 = (l - l.adjoint()) / 2.0;
      break;
    case SplitChoice::kZ0Shifted:
      l1 = z0 * Matrix::Identity(n, n) - (b + b.adjoint()) / 2.0;
      l2 = (b.adjoint() - b) / 2.0;
      break;
    case SplitChoice::kCustom:
      throw ConfigError("augment_split: custom split needs explicit parts");
  }
  return augment(gamma1, l1, l2);
}

Matrix h0_matrix(const AugmentedProblem& aug) {
  return subspace_inverse_dense(aug.l0_block, aug.proj0);
}

Matrix h0_via_resolvent(const AugmentedProblem& aug, Complex z_aug) {
  // z I - P0 B0 P0 with B0 = z I - L0 equals z (I - P0) + P0 L0 P0, whose
  // inverse times P0 is the subspace inverse for every z: the z-dependence
  // lives entirely on the complement, which P0 kills.
  const Index n2 = aug.l0_block.rows();
  const Matrix id = Matrix::Identity(n2, n2);
  const Matrix m =
      z_aug * (id - aug.proj0) + aug.proj0 * aug.l0_block * aug.proj0;
  Eigen::FullPivLU<Matrix> lu(m);
  if (!lu.isInvertible())
    throw SingularOperatorError(
        "h0_via_resolvent: doubled operator is singular on its subspace");
  return lu.solve(aug.proj0);
}

double remarkable_identity_deviation(const AugmentedProblem& aug,
                                     const Matrix& b, Complex z0) {
  const Index n = aug.gamma1.rows();
  const Matrix id = Matrix::Identity(n, n);
  const Matrix h0 = h0_matrix(aug);

  Matrix collect(2 * n, n);  // (-I ; L1 - L2)
  collect.topRows(n) = -id;
  collect.bottomRows(n) = aug.l1 - aug.l2;
  Matrix select(n, 2 * n);  // (0 I)
  select.leftCols(n).setZero();
  select.rightCols(n) = id;

  Eigen::FullPivLU<Matrix> l1lu(aug.l1);
  if (!l1lu.isInvertible())
    throw SingularOperatorError("remarkable identity: L1 is singular");
  const Matrix rhs = select * h0 * collect * l1lu.inverse() -
                     (aug.gamma1 - id) / z0;

  const Matrix a = aug.gamma1 * b * aug.gamma1;
  Eigen::FullPivLU<Matrix> lu(z0 * id - a);
  if (!lu.isInvertible())
    throw SingularOperatorError(
        "remarkable identity: z0 lies in the projected spectrum");
  const Matrix lhs = lu.inverse();
  return (lhs - rhs).norm() / std::max(lhs.norm(), 1e-300);
}

double remarkable_identity_deviation(const Matrix& gamma1, const Matrix& b,
                                     Complex z0, SplitChoice split) {
  return remarkable_identity_deviation(augment_split(gamma1, b, z0, split), b,
                                       z0);
}

ShiftedAugmentedFamily ShiftedAugmentedFamily::from_b(
    const Matrix& gamma1, const Matrix& b, std::optional<double> c_override) {
  ShiftedAugmentedFamily fam;
  const Index n = gamma1.rows();
  if (b.rows() != n || b.cols() != n)
    throw ConfigError("shifted family: dimension mismatch");
  fam.gamma1 = gamma1;
  fam.b_norm = b.jacobiSvd().singularValues()(0);
  const Matrix herm = (b + b.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(herm, Eigen::EigenvaluesOnly);
  const double top = es.eigenvalues()(n - 1);
  fam.c = c_override ? *c_override : top + 0.1 * fam.b_norm;
  fam.m0 = fam.c * Matrix::Identity(n, n) - herm;
  Eigen::SelfAdjointEigenSolver<Matrix> em(fam.m0, Eigen::EigenvaluesOnly);
  fam.coercivity_margin = em.eigenvalues()(0);
  if (!(fam.coercivity_margin > 0))
    throw ConfigError(
        "shifted family: c does not clear the Hermitian part, M0 is not "
        "coercive");
  fam.l2 = (b.adjoint() - b) / 2.0;
  const Matrix gamma2 = Matrix::Identity(n, n) - gamma1;
  fam.proj0 = block2(gamma2, Matrix::Zero(n, n), Matrix::Zero(n, n), gamma1);
  return fam;
}

Matrix ShiftedAugmentedFamily::l1(Complex w0) const {
  return w0 * Matrix::Identity(base_dim(), base_dim()) + m0;
}

Matrix ShiftedAugmentedFamily::h1() const {
  const Index n = base_dim();
  const Matrix gamma2 = Matrix::Identity(n, n) - gamma1;
  return block2(gamma2, Matrix::Zero(n, n), Matrix::Zero(n, n),
                Matrix::Zero(n, n));
}

Matrix ShiftedAugmentedFamily::h0(Complex w0) const {
  AugmentedProblem aug = augment(gamma1, l1(w0), l2);
  return h0_matrix(aug);
}

H0Evaluation evaluate_H0(const ShiftedAugmentedFamily& fam, Complex w0) {
  H0Evaluation out;
  out.w0 = w0;
  out.h0 = fam.h0(w0);
  out.hermitian_defect = relative_asymmetry(out.h0);
  const Matrix q = projector_range_basis(fam.proj0);
  const Matrix restricted = q.adjoint() * out.h0 * q;
  Eigen::SelfAdjointEigenSolver<Matrix> es(
      ((restricted + restricted.adjoint()) / 2.0).eval(),
      Eigen::EigenvaluesOnly);
  out.hermitian_min = es.eigenvalues()(0);
  return out;
}

}  // namespace rlab
