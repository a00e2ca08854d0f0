#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "rlab/grid.hpp"
#include "rlab/operator.hpp"

namespace rlab {

/// Multiplication by a small m x m block at each grid point (or at each slot
/// of an abstract field).  The workhorse for coefficient fields B(x), L(x).
class LocalOperator {
 public:
  LocalOperator() = default;
  LocalOperator(const PeriodicGrid& grid, int components,
                std::vector<Matrix> blocks);
  /// Abstract variant: `points` slots with no grid attached.
  LocalOperator(Index points, int components, std::vector<Matrix> blocks);

  static LocalOperator constant(const PeriodicGrid& grid, Matrix block);

  const std::optional<PeriodicGrid>& grid() const { return grid_; }
  Index points() const { return points_; }
  int components() const { return components_; }
  const Matrix& block(Index p) const { return (*blocks_)[p]; }
  FieldShape shape() const { return {points_, components_}; }
  double weight() const { return grid_ ? grid_->weight() : 1.0; }

  ComplexField apply(const ComplexField& f) const;
  OperatorHandle to_handle() const;

  /// Pointwise map over blocks (new operator, same layout).
  LocalOperator map(const std::function<Matrix(const Matrix&)>& fn) const;

  /// Smallest / largest eigenvalue of the Hermitian part over all points.
  double min_hermitian_eig() const;
  double max_hermitian_eig() const;
  /// max over points of the spectral norm.
  double max_block_norm() const;

 private:
  std::optional<PeriodicGrid> grid_;
  Index points_ = 0;
  int components_ = 0;
  std::shared_ptr<std::vector<Matrix>> blocks_;
};

LocalOperator add(const LocalOperator& a, const LocalOperator& b);
LocalOperator subtract(const LocalOperator& a, const LocalOperator& b);
LocalOperator scale(Complex c, const LocalOperator& a);
/// c*I - A pointwise.
LocalOperator shift_minus(Complex c, const LocalOperator& a);

}  // namespace rlab
