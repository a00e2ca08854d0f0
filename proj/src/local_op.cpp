#include "rlab/local_op.hpp"

#include <Eigen/Eigenvalues>

namespace rlab {

LocalOperator::LocalOperator(const PeriodicGrid& grid, int components,
                             std::vector<Matrix> blocks)
    : grid_(grid),
      points_(grid.total_points()),
      components_(components),
      blocks_(std::make_shared<std::vector<Matrix>>(std::move(blocks))) {
  if (static_cast<Index>(blocks_->size()) != points_)
    throw ConfigError("local operator needs one block per grid point");
  for (const auto& b : *blocks_)
    if (b.rows() != components_ || b.cols() != components_)
      throw ConfigError("local operator block of wrong size");
}

LocalOperator::LocalOperator(Index points, int components,
                             std::vector<Matrix> blocks)
    : points_(points),
      components_(components),
      blocks_(std::make_shared<std::vector<Matrix>>(std::move(blocks))) {
  if (static_cast<Index>(blocks_->size()) != points_)
    throw ConfigError("local operator needs one block per point");
  for (const auto& b : *blocks_)
    if (b.rows() != components_ || b.cols() != components_)
      throw ConfigError("local operator block of wrong size");
}

LocalOperator LocalOperator::constant(const PeriodicGrid& grid, Matrix block) {
  std::vector<Matrix> blocks(static_cast<size_t>(grid.total_points()), block);
  return LocalOperator(grid, static_cast<int>(block.rows()), std::move(blocks));
}

ComplexField LocalOperator::apply(const ComplexField& f) const {
  if (f.shape() != shape())
    throw ConfigError("local operator applied to wrong field shape");
  Vector out(f.dim());
  const int m = components_;
  for (Index p = 0; p < points_; ++p)
    out.segment(p * m, m) = (*blocks_)[p] * f.values().segment(p * m, m);
  return f.same_shape(std::move(out));
}

OperatorHandle LocalOperator::to_handle() const {
  LocalOperator self = *this;
  return OperatorHandle(
      shape(), OperatorTag::kRealLocal,
      [self](const ComplexField& f) { return self.apply(f); },
      [self](const ComplexField& f) {
        Vector out(f.dim());
        const int m = self.components();
        for (Index p = 0; p < self.points(); ++p)
          out.segment(p * m, m) =
              self.block(p).adjoint() * f.values().segment(p * m, m);
        return f.same_shape(std::move(out));
      });
}

LocalOperator LocalOperator::map(
    const std::function<Matrix(const Matrix&)>& fn) const {
  std::vector<Matrix> blocks;
  blocks.reserve(blocks_->size());
  for (const auto& b : *blocks_) blocks.push_back(fn(b));
  if (grid_) return LocalOperator(*grid_, components_, std::move(blocks));
  return LocalOperator(points_, components_, std::move(blocks));
}

double LocalOperator::min_hermitian_eig() const {
  double lo = std::numeric_limits<double>::infinity();
  for (const auto& b : *blocks_) {
    Eigen::SelfAdjointEigenSolver<Matrix> es((b + b.adjoint()) / 2.0,
                                             Eigen::EigenvaluesOnly);
    lo = std::min(lo, es.eigenvalues().minCoeff());
  }
  return lo;
}

double LocalOperator::max_hermitian_eig() const {
  double hi = -std::numeric_limits<double>::infinity();
  for (const auto& b : *blocks_) {
    Eigen::SelfAdjointEigenSolver<Matrix> es((b + b.adjoint()) / 2.0,
                                             Eigen::EigenvaluesOnly);
    hi = std::max(hi, es.eigenvalues().maxCoeff());
  }
  return hi;
}

double LocalOperator::max_block_norm() const {
  double top = 0.0;
  for (const auto& b : *blocks_) {
    Eigen::JacobiSVD<Matrix> svd(b);
    if (svd.singularValues().size())
      top = std::max(top, svd.singularValues()[0]);
  }
  return top;
}

namespace {

LocalOperator zip(const LocalOperator& a, const LocalOperator& b,
                  const std::function<Matrix(const Matrix&, const Matrix&)>& fn) {
  if (a.points() != b.points() || a.components() != b.components())
    throw ConfigError("combining local operators of different layout");
  std::vector<Matrix> blocks;
  blocks.reserve(static_cast<size_t>(a.points()));
  for (Index p = 0; p < a.points(); ++p)
    blocks.push_back(fn(a.block(p), b.block(p)));
  if (a.grid()) return LocalOperator(*a.grid(), a.components(), std::move(blocks));
  return LocalOperator(a.points(), a.components(), std::move(blocks));
}

}  // namespace

LocalOperator add(const LocalOperator& a, const LocalOperator& b) {
  return zip(a, b, [](const Matrix& x, const Matrix& y) { return Matrix(x + y); });
}

LocalOperator subtract(const LocalOperator& a, const LocalOperator& b) {
  return zip(a, b, [](const Matrix& x, const Matrix& y) { return Matrix(x - y); });
}

LocalOperator scale(Complex c, const LocalOperator& a) {
  return a.map([c](const Matrix& x) { return Matrix(c * x); });
}

LocalOperator shift_minus(Complex c, const LocalOperator& a) {
  const Matrix id = Matrix::Identity(a.components(), a.components());
  return a.map([c, id](const Matrix& x) { return Matrix(c * id - x); });
}

}  // namespace rlab
