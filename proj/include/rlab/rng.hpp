#pragma once

#include <random>

#include "rlab/field.hpp"

namespace rlab {

/// Deterministic draws for tests, scenarios and certificate sampling.  All
/// randomness in the project flows through one of these so a seed pins an
/// entire run.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform(double lo = 0.0, double hi = 1.0) {
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
  }

  double gaussian() { return normal_(engine_); }

  Complex complex_gaussian() { return Complex(gaussian(), gaussian()); }

  Vector vector(Index n) {
    Vector v(n);
    for (Index i = 0; i < n; ++i) v(i) = complex_gaussian();
    return v;
  }

  Matrix matrix(Index rows, Index cols) {
    Matrix m(rows, cols);
    for (Index i = 0; i < rows; ++i)
      for (Index j = 0; j < cols; ++j) m(i, j) = complex_gaussian();
    return m;
  }

  Matrix hermitian(Index n) {
    Matrix g = matrix(n, n);
    return (g + g.adjoint()) / 2.0;
  }

  /// Haar-distributed unitary via QR of a Ginibre draw with the phase fix
  /// that makes the distribution exactly invariant.
  Matrix haar_unitary(Index n) {
    Matrix g = matrix(n, n);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ() * Matrix::Identity(n, n);
    Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Index j = 0; j < n; ++j) {
      Complex d = r(j, j);
      double a = std::abs(d);
      q.col(j) *= (a == 0.0) ? Complex(1.0, 0.0) : d / a;
    }
    return q;
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace rlab
