#include "rlab/dense.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>
#include <algorithm>
#include <vector>

namespace rlab {

Matrix materialize(const OperatorHandle& op, Index cap) {
  const Index n = op.dim();
  if (n > cap)
    throw DimensionCapError("materialize: dimension " + std::to_string(n) +
                            " above cap " + std::to_string(cap));
  Matrix out(n, n);
  ComplexField e(op.shape());
  for (Index j = 0; j < n; ++j) {
    e.values().setZero();
    e.values()[j] = 1.0;
    out.col(j) = op.apply(e).values();
  }
  return out;
}

HermitianCheck hermitian_check(const Matrix& a, double rel_tol) {
  const double scale = std::max(a.cwiseAbs().maxCoeff(), 1e-300);
  const double asym = (a - a.adjoint()).cwiseAbs().maxCoeff() / scale;
  return {asym <= rel_tol, asym};
}

namespace {

Eigen::VectorXcd sorted_complex(Eigen::VectorXcd v) {
  std::vector<Complex> tmp(v.data(), v.data() + v.size());
  std::sort(tmp.begin(), tmp.end(), [](Complex a, Complex b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  for (Index i = 0; i < v.size(); ++i) v[i] = tmp[static_cast<size_t>(i)];
  return v;
}

SpectrumResult spectrum_of_matrix(const Matrix& m) {
  SpectrumResult res;
  res.hermitian = hermitian_check(m).hermitian;
  if (res.hermitian) {
    Eigen::SelfAdjointEigenSolver<Matrix> es((m + m.adjoint()) / 2.0);
    res.eigenvalues = es.eigenvalues().cast<Complex>();
    if (es.eigenvalues().size() > 0) {
      res.interval = SpectrumInterval{es.eigenvalues().minCoeff(),
                                      es.eigenvalues().maxCoeff(),
                                      SpectrumInterval::Kind::kExact};
    }
  } else {
    Eigen::ComplexEigenSolver<Matrix> es(m, /*computeEigenvectors=*/false);
    res.eigenvalues = sorted_complex(es.eigenvalues());
  }
  return res;
}

}  // namespace

SpectrumResult brute_force_spectrum(const OperatorHandle& op, Index cap) {
  return spectrum_of_matrix(materialize(op, cap));
}

SpectrumResult brute_force_spectrum_restricted(const OperatorHandle& op,
                                               const OperatorHandle& proj,
                                               Index cap) {
  const Matrix p = materialize(proj, cap);
  const Matrix q = projector_range_basis(p);
  if (q.cols() == 0)
    throw SingularOperatorError("restricted spectrum: projector has empty range");
  const Matrix m = materialize(op, cap);
  return spectrum_of_matrix(q.adjoint() * m * q);
}

DefinitenessReport hermitian_part_definite(const Matrix& a, double margin) {
  Eigen::SelfAdjointEigenSolver<Matrix> es((a + a.adjoint()) / 2.0,
                                           Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues().minCoeff();
  return {lo, lo > margin};
}

DefinitenessReport hermitian_part_definite(const OperatorHandle& op,
                                           double margin, Index cap) {
  return hermitian_part_definite(materialize(op, cap), margin);
}

Matrix projector_range_basis(const Matrix& p, double rel_tol) {
  Eigen::ColPivHouseholderQR<Matrix> qr(p);
  const Index n = p.rows();
  const auto& rdiag = qr.matrixR().diagonal();
  const double top = rdiag.size() ? std::abs(rdiag[0]) : 0.0;
  Index rank = 0;
  for (Index i = 0; i < rdiag.size(); ++i)
    if (std::abs(rdiag[i]) > rel_tol * top) ++rank;
  Matrix q = qr.householderQ() * Matrix::Identity(n, rank);
  return q;
}

Matrix subspace_inverse_dense(const Matrix& op, const Matrix& proj,
                              SubspaceInverseOptions opts) {
  const Matrix q = projector_range_basis(proj);
  if (q.cols() == 0)
    throw SingularOperatorError("subspace inverse: projector has empty range");
  const Matrix s = q.adjoint() * op * q;
  Eigen::BDCSVD<Matrix> svd(s);
  const auto& sv = svd.singularValues();
  const double smax = sv[0];
  const double smin = sv[sv.size() - 1];
  if (!(smin > 0.0) || smax / smin > opts.cond_cap)
    throw SingularOperatorError(
        "subspace inverse: restricted block condition " +
        std::to_string(smin > 0.0 ? smax / smin : std::norm(smax)) +
        " beyond cap");
  return q * s.inverse() * q.adjoint();
}

OperatorHandle subspace_inverse(const OperatorHandle& op,
                                const OperatorHandle& proj,
                                SubspaceInverseOptions opts) {
  Matrix x = subspace_inverse_dense(materialize(op, opts.cap),
                                    materialize(proj, opts.cap), opts);
  return OperatorHandle::dense(std::move(x), op.shape());
}

}  // namespace rlab
