#pragma once

#include <functional>
#include <memory>
#include <string>
#include <utility>

#include "rlab/field.hpp"

namespace rlab {

/// How an operator acts, which decides the cheap application path:
/// kDense       explicit matrix,
/// kFourierLocal multiplication by a small block at each frequency,
/// kRealLocal   multiplication by a small block at each grid point,
/// kComposite   algebraic combination of the above.
enum class OperatorTag { kDense, kFourierLocal, kRealLocal, kComposite };

inline const char* to_string(OperatorTag t) {
  switch (t) {
    case OperatorTag::kDense: return "dense";
    case OperatorTag::kFourierLocal: return "fourier-local";
    case OperatorTag::kRealLocal: return "real-local";
    case OperatorTag::kComposite: return "composite";
  }
  return "?";
}

/// Type-erased linear operator on ComplexField, with an adjoint path.
/// Handles are cheap to copy (shared closures) and immutable once built.
class OperatorHandle {
 public:
  using Apply = std::function<ComplexField(const ComplexField&)>;

  OperatorHandle() = default;
  OperatorHandle(FieldShape shape, OperatorTag tag, Apply apply, Apply adjoint)
      : shape_(shape),
        tag_(tag),
        apply_(std::move(apply)),
        adjoint_(std::move(adjoint)) {}

  Index dim() const { return shape_.dim(); }
  const FieldShape& shape() const { return shape_; }
  OperatorTag tag() const { return tag_; }
  bool valid() const { return static_cast<bool>(apply_); }

  ComplexField apply(const ComplexField& f) const {
    if (f.shape() != shape_)
      throw ConfigError("operator applied to field of wrong shape");
    return apply_(f);
  }
  ComplexField apply_adjoint(const ComplexField& f) const {
    if (f.shape() != shape_)
      throw ConfigError("operator adjoint applied to field of wrong shape");
    return adjoint_(f);
  }

  static OperatorHandle dense(Matrix a, FieldShape shape);
  static OperatorHandle dense(Matrix a);  // abstract shape {n, 1}
  static OperatorHandle identity(FieldShape shape);
  static OperatorHandle scaled_identity(FieldShape shape, Complex c);
  static OperatorHandle zero(FieldShape shape);

 private:
  FieldShape shape_{};
  OperatorTag tag_ = OperatorTag::kComposite;
  Apply apply_;
  Apply adjoint_;
};

OperatorHandle compose(const OperatorHandle& a, const OperatorHandle& b);
OperatorHandle add(const OperatorHandle& a, const OperatorHandle& b);
OperatorHandle subtract(const OperatorHandle& a, const OperatorHandle& b);
OperatorHandle scale(Complex c, const OperatorHandle& a);
OperatorHandle adjoint_of(const OperatorHandle& a);

// ---- implementation -------------------------------------------------------

inline OperatorHandle OperatorHandle::dense(Matrix a, FieldShape shape) {
  if (a.rows() != a.cols() || a.rows() != shape.dim())
    throw ConfigError("dense operator must be square and match the shape");
  auto m = std::make_shared<Matrix>(std::move(a));
  return OperatorHandle(
      shape, OperatorTag::kDense,
      [m](const ComplexField& f) { return f.same_shape((*m) * f.values()); },
      [m](const ComplexField& f) {
        return f.same_shape(m->adjoint() * f.values());
      });
}

inline OperatorHandle OperatorHandle::dense(Matrix a) {
  FieldShape s{a.rows(), 1};
  return dense(std::move(a), s);
}

inline OperatorHandle OperatorHandle::identity(FieldShape shape) {
  auto id = [](const ComplexField& f) { return f; };
  return OperatorHandle(shape, OperatorTag::kRealLocal, id, id);
}

inline OperatorHandle OperatorHandle::scaled_identity(FieldShape shape,
                                                      Complex c) {
  return OperatorHandle(
      shape, OperatorTag::kRealLocal,
      [c](const ComplexField& f) { return f.same_shape(c * f.values()); },
      [c](const ComplexField& f) {
        return f.same_shape(std::conj(c) * f.values());
      });
}

inline OperatorHandle OperatorHandle::zero(FieldShape shape) {
  auto z = [](const ComplexField& f) {
    return f.same_shape(Vector::Zero(f.dim()));
  };
  return OperatorHandle(shape, OperatorTag::kRealLocal, z, z);
}

inline OperatorHandle compose(const OperatorHandle& a, const OperatorHandle& b) {
  if (a.shape() != b.shape())
    throw ConfigError("composing operators of different shapes");
  return OperatorHandle(
      a.shape(), OperatorTag::kComposite,
      [a, b](const ComplexField& f) { return a.apply(b.apply(f)); },
      [a, b](const ComplexField& f) {
        return b.apply_adjoint(a.apply_adjoint(f));
      });
}

inline OperatorHandle add(const OperatorHandle& a, const OperatorHandle& b) {
  if (a.shape() != b.shape())
    throw ConfigError("adding operators of different shapes");
  return OperatorHandle(
      a.shape(), OperatorTag::kComposite,
      [a, b](const ComplexField& f) {
        return f.same_shape(a.apply(f).values() + b.apply(f).values());
      },
      [a, b](const ComplexField& f) {
        return f.same_shape(a.apply_adjoint(f).values() +
                            b.apply_adjoint(f).values());
      });
}

inline OperatorHandle subtract(const OperatorHandle& a, const OperatorHandle& b) {
  return add(a, scale(-1.0, b));
}

inline OperatorHandle scale(Complex c, const OperatorHandle& a) {
  return OperatorHandle(
      a.shape(), OperatorTag::kComposite,
      [c, a](const ComplexField& f) {
        return f.same_shape(c * a.apply(f).values());
      },
      [c, a](const ComplexField& f) {
        return f.same_shape(std::conj(c) * a.apply_adjoint(f).values());
      });
}

inline OperatorHandle adjoint_of(const OperatorHandle& a) {
  return OperatorHandle(
      a.shape(), a.tag(),
      [a](const ComplexField& f) { return a.apply_adjoint(f); },
      [a](const ComplexField& f) { return a.apply(f); });
}

}  // namespace rlab
