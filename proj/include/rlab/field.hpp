#pragma once

#include <Eigen/Dense>
#include <complex>
#include <utility>

#include "rlab/errors.hpp"

namespace rlab {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;
using Index = Eigen::Index;

/// Shape of a sampled field: number of grid points and components per point.
/// Abstract vectors are fields with one component per "point".
struct FieldShape {
  Index points = 0;
  Index components = 1;

  Index dim() const { return points * components; }
  bool operator==(const FieldShape&) const = default;
};

/// Flat complex sample array, point-major with components fastest:
/// value(p, c) lives at index p*components + c.  The quadrature weight is the
/// cell volume divided by the number of grid samples (1 for abstract vectors),
/// so inner products approximate unit-cell integrals.
class ComplexField {
 public:
  ComplexField() = default;

  explicit ComplexField(FieldShape shape, double weight = 1.0)
      : shape_(shape), weight_(weight), values_(Vector::Zero(shape.dim())) {}

  ComplexField(FieldShape shape, Vector values, double weight = 1.0)
      : shape_(shape), weight_(weight), values_(std::move(values)) {
    if (values_.size() != shape_.dim())
      throw ConfigError("field data size does not match shape");
  }

  /// Abstract n-vector: n points of one component, unit weight.
  static ComplexField abstract(Vector values) {
    FieldShape s{values.size(), 1};
    return ComplexField(s, std::move(values));
  }

  const FieldShape& shape() const { return shape_; }
  double weight() const { return weight_; }
  Index dim() const { return shape_.dim(); }

  Vector& values() { return values_; }
  const Vector& values() const { return values_; }

  Complex& at(Index point, Index comp) {
    return values_[point * shape_.components + comp];
  }
  Complex at(Index point, Index comp) const {
    return values_[point * shape_.components + comp];
  }

  ComplexField same_shape(Vector values) const {
    return ComplexField(shape_, std::move(values), weight_);
  }

 private:
  FieldShape shape_{};
  double weight_ = 1.0;
  Vector values_;
};

/// Conjugate-linear in the first argument; accumulates in sample order so the
/// result is bit-stable run to run.
inline Complex inner_product(const ComplexField& a, const ComplexField& b) {
  if (a.shape() != b.shape())
    throw ConfigError("inner product of mismatched field shapes");
  Complex acc = 0.0;
  const Vector& x = a.values();
  const Vector& y = b.values();
  for (Index i = 0; i < x.size(); ++i) acc += std::conj(x[i]) * y[i];
  return a.weight() * acc;
}

inline double field_norm(const ComplexField& f) {
  return std::sqrt(std::real(inner_product(f, f)));
}

}  // namespace rlab
