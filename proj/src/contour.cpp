#include "rlab/contour.hpp"

#include <cmath>
#include <numbers>

#include "rlab/errors.hpp"

namespace rlab {

Contour default_contour(const SpectrumInterval& bounds) {
  return Contour{Complex((bounds.lo + bounds.hi) / 2.0, 0.0),
                 0.6 * (bounds.hi - bounds.lo) + 1.0};
}

Matrix matrix_function_contour(const OperatorHandle& a,
                               const std::function<Complex(Complex)>& f,
                               const Contour& contour, int nodes, Index cap) {
  if (nodes < 4) throw ConfigError("contour quadrature needs at least 4 nodes");
  if (!(contour.radius > 0)) throw ConfigError("contour radius must be positive");

  const Matrix am = materialize(a, cap);
  const Index n = am.rows();

  Eigen::ComplexEigenSolver<Matrix> eig(am, /*computeEigenvectors=*/false);
  if (eig.info() != Eigen::Success)
    throw NumericalAssertion("eigensolve failed while checking the contour");
  for (Index i = 0; i < n; ++i) {
    if (std::abs(eig.eigenvalues()(i) - contour.center) > 0.9 * contour.radius)
      throw SingularOperatorError(
          "contour passes within a tenth of its radius of the spectrum");
  }

  const Matrix id = Matrix::Identity(n, n);
  Matrix acc = Matrix::Zero(n, n);
  for (int j = 0; j < nodes; ++j) {
    const double theta = 2.0 * std::numbers::pi * j / nodes;
    const Complex phase = std::exp(Complex(0.0, theta));
    const Complex z = contour.center + contour.radius * phase;
    acc += f(z) * phase * (z * id - am).partialPivLu().solve(id);
  }
  return acc * (contour.radius / static_cast<double>(nodes));
}

}  // namespace rlab
