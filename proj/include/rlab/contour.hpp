#pragma once

#include <functional>

#include "rlab/dense.hpp"

namespace rlab {

struct Contour {
  Complex center = 0.0;
  double radius = 1.0;
};

/// Circle centered on the midpoint of a spectral interval, radius
/// 0.6 * width + 1: comfortably clear of the endpoints so the quadrature
/// nodes never graze the spectrum.
Contour default_contour(const SpectrumInterval& bounds);

/// f(A) by the trapezoid rule on a circle around the spectrum:
///   (r/M) sum_j f(z_j) (z_j I - A)^{-1} e^{i theta_j},  z_j on the circle.
/// Every eigenvalue must sit inside with at least a tenth of the radius to
/// spare (checked densely); convergence in the node count is exponential.
Matrix matrix_function_contour(const OperatorHandle& a,
                               const std::function<Complex(Complex)>& f,
                               const Contour& contour, int nodes,
                               Index cap = kDenseCap);

}  // namespace rlab
