#include "rlab/null_t.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "rlab/errors.hpp"

namespace rlab {
namespace {

Matrix rotation_block(double amplitude) {
  Matrix r = Matrix::Zero(2, 2);
  r(0, 1) = Complex(amplitude, 0.0);
  r(1, 0) = Complex(-amplitude, 0.0);
  return r;
}

// T[(ij),(lm)] = delta_ij delta_lm - delta_im delta_jl, row-major pairs.
Matrix trace_block(Index d, double amplitude) {
  Matrix t = Matrix::Zero(d * d, d * d);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j)
      for (Index l = 0; l < d; ++l)
        for (Index m = 0; m < d; ++m) {
          double v = 0.0;
          if (i == j && l == m) v += 1.0;
          if (i == m && j == l) v -= 1.0;
          t(i * d + j, l * d + m) = Complex(amplitude * v, 0.0);
        }
  return t;
}

// U_{il} = eps_{ijl} u_j, i.e. U e = u x e.
Matrix cross_matrix(const Eigen::Vector3cd& u) {
  Matrix m = Matrix::Zero(3, 3);
  m(0, 1) = u(2);
  m(0, 2) = -u(1);
  m(1, 0) = -u(2);
  m(1, 2) = u(0);
  m(2, 0) = u(1);
  m(2, 1) = -u(0);
  return m;
}

LocalOperator cross_field(const PeriodicGrid& grid, const Vector& u_values) {
  std::vector<Matrix> blocks;
  const Index points = grid.total_points();
  blocks.reserve(points);
  for (Index p = 0; p < points; ++p) {
    Eigen::Vector3cd u;
    for (Index c = 0; c < 3; ++c) u(c) = u_values(p * 3 + c);
    blocks.push_back(cross_matrix(u));
  }
  return LocalOperator(grid, 3, std::move(blocks));
}

// Relative size of P T P on a handful of fixed-seed probe fields.
double probe_defect(const NullTOperator& t, int probes = 3) {
  std::mt19937_64 rng(271828);
  std::normal_distribution<double> dist(0.0, 1.0);
  const FieldShape shape = t.multiplier.shape();
  double worst = 0.0;
  double scale = t.multiplier.max_block_norm();
  if (scale == 0.0) scale = 1.0;
  for (int probe = 0; probe < probes; ++probe) {
    ComplexField phi(shape, t.multiplier.weight());
    for (Index i = 0; i < phi.values().size(); ++i)
      phi.values()(i) = Complex(dist(rng), dist(rng));
    ComplexField projected = t.projector.apply(phi);
    ComplexField out = t.projector.apply(t.multiplier.apply(projected));
    double denom = scale * field_norm(projected);
    if (denom == 0.0) continue;
    worst = std::max(worst, field_norm(out) / denom);
  }
  return worst;
}

}  // namespace

NullTOperator rotation_null_t(const PeriodicGrid& grid, double amplitude) {
  if (grid.dim != 2)
    throw ConfigError("rotation_null_t: grid must be two-dimensional");
  return NullTOperator{NullTKind::kRotation2d,
                       LocalOperator::constant(grid, rotation_block(amplitude)),
                       FourierLocalOperator::conductivity_projector(grid)};
}

NullTOperator antisym_null_t(const PeriodicGrid& grid,
                             const std::array<int, 3>& mode, double amplitude) {
  if (grid.dim != 3)
    throw ConfigError("antisym_null_t: grid must be three-dimensional");
  int axis = -1;
  for (int a = 0; a < 3; ++a) {
    if (mode[a] == 0) continue;
    if (axis >= 0)
      throw ConfigError(
          "antisym_null_t: mode must be axis-aligned; a multi-axis mode "
          "leaves wrapped matrix elements behind on a sampled grid");
    axis = a;
  }
  if (axis < 0) throw ConfigError("antisym_null_t: mode must be nonzero");
  if (std::abs(mode[axis]) >= grid.n / 2)
    throw ConfigError("antisym_null_t: mode must sit below Nyquist");

  // psi = amp cos(2 pi n x_axis / N); u = grad psi is a single sine ridge.
  const double kphys =
      2.0 * std::numbers::pi * mode[axis] / grid.lengths[axis];
  const Index points = grid.total_points();
  Vector u = Vector::Zero(points * 3);
  for (Index p = 0; p < points; ++p) {
    const auto idx = grid.unravel(p);
    const double phase =
        2.0 * std::numbers::pi * mode[axis] * idx[axis] / grid.n;
    u(p * 3 + axis) = Complex(-amplitude * kphys * std::sin(phase), 0.0);
  }
  return NullTOperator{NullTKind::kAntisymDivFree3d, cross_field(grid, u),
                       FourierLocalOperator::conductivity_projector(grid)};
}

NullTOperator antisym_null_t_from_u(const PeriodicGrid& grid,
                                    const Vector& u_values) {
  if (grid.dim != 3)
    throw ConfigError("antisym_null_t_from_u: grid must be three-dimensional");
  const Index points = grid.total_points();
  if (u_values.size() != points * 3)
    throw ConfigError("antisym_null_t_from_u: expected a 3-component field");

  // Spectral curl: (i k x u_hat) must vanish mode by mode.
  Fft fft(grid, 3);
  Vector uhat(u_values.size());
  fft.forward(u_values, uhat);
  double curl = 0.0;
  double umax = 0.0;
  for (Index p = 0; p < points; ++p) {
    const Eigen::Vector3d k = grid.kvec(p);
    Eigen::Vector3cd uk;
    for (Index c = 0; c < 3; ++c) uk(c) = uhat(p * 3 + c);
    umax = std::max(umax, uk.norm());
    Eigen::Vector3cd c = Complex(0.0, 1.0) * k.cast<Complex>().cross(uk);
    curl = std::max(curl, c.norm());
  }
  if (umax == 0.0)
    throw ConfigError("antisym_null_t_from_u: field is identically zero");
  const double kscale =
      2.0 * std::numbers::pi * (grid.n / 2) /
      *std::min_element(grid.lengths.begin(), grid.lengths.begin() + 3);
  if (curl > 1e-8 * kscale * umax)
    throw ConfigError("antisym_null_t_from_u: field is not curl-free");

  NullTOperator t{NullTKind::kAntisymDivFree3d, cross_field(grid, u_values),
                  FourierLocalOperator::conductivity_projector(grid)};
  if (probe_defect(t) > 1e-10)
    throw ConfigError(
        "antisym_null_t_from_u: projected product does not vanish on this "
        "grid (the potential mixes axes, so pointwise products alias)");
  return t;
}

NullTOperator elasticity_trace_null_t(const PeriodicGrid& grid,
                                      double amplitude) {
  const Index d = grid.dim;
  return NullTOperator{
      NullTKind::kElasticityTrace,
      LocalOperator::constant(grid, trace_block(d, amplitude)),
      FourierLocalOperator::vector_gradient_projector(grid)};
}

LocalOperator shift_by_null_t(const LocalOperator& l, Complex coeff,
                              const NullTOperator& t) {
  return add(l, scale(coeff, t.multiplier));
}

double null_t_defect(const NullTOperator& t) {
  const FieldShape shape = t.multiplier.shape();
  const Index dim = shape.points * shape.components;
  double worst = 0.0;
  ComplexField basis(shape, t.multiplier.weight());
  for (Index j = 0; j < dim; ++j) {
    basis.values().setZero();
    basis.values()(j) = Complex(1.0, 0.0);
    ComplexField col =
        t.projector.apply(t.multiplier.apply(t.projector.apply(basis)));
    worst = std::max(worst, col.values().cwiseAbs().maxCoeff());
  }
  return worst;
}

}  // namespace rlab
