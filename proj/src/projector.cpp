#include "rlab/projector.hpp"

#include <Eigen/SVD>

namespace rlab {

FourierLocalOperator::FourierLocalOperator(const PeriodicGrid& grid,
                                           int components,
                                           std::vector<Matrix> blocks,
                                           DirectionBlock direction_block)
    : grid_(grid),
      components_(components),
      blocks_(std::make_shared<std::vector<Matrix>>(std::move(blocks))),
      direction_block_(std::move(direction_block)),
      fft_(std::make_shared<Fft>(grid, components)) {
  if (static_cast<Index>(blocks_->size()) != grid_.total_points())
    throw ConfigError("fourier-local operator needs one block per frequency");
  for (const auto& b : *blocks_)
    if (b.rows() != components_ || b.cols() != components_)
      throw ConfigError("fourier-local block of wrong size");
}

namespace {

std::vector<Matrix> build_blocks(const PeriodicGrid& grid, int m,
                                 const FourierLocalOperator::DirectionBlock& fn,
                                 ZeroModePolicy policy, const Matrix* zero_block) {
  std::vector<Matrix> blocks;
  const Index total = grid.total_points();
  blocks.reserve(static_cast<size_t>(total));
  for (Index i = 0; i < total; ++i) {
    if (grid.is_zero_freq(i)) {
      switch (policy) {
        case ZeroModePolicy::kAnnihilate:
          blocks.push_back(Matrix::Zero(m, m));
          break;
        case ZeroModePolicy::kIdentity:
          blocks.push_back(Matrix::Identity(m, m));
          break;
        case ZeroModePolicy::kCustom:
          if (!zero_block || zero_block->rows() != m || zero_block->cols() != m)
            throw ConfigError("custom zero-mode policy needs an m x m block");
          blocks.push_back(*zero_block);
          break;
      }
    } else {
      blocks.push_back(fn(grid.kvec(i).normalized()));
    }
  }
  return blocks;
}

}  // namespace

FourierLocalOperator FourierLocalOperator::conductivity_projector(
    const PeriodicGrid& grid, ZeroModePolicy policy, const Matrix* zero_block) {
  const int m = grid.dim;
  DirectionBlock fn = [m](const Eigen::Vector3d& khat) {
    Eigen::VectorXd kh = khat.head(m);
    Matrix b = (kh * kh.transpose()).cast<Complex>();
    return b;
  };
  return FourierLocalOperator(grid, m,
                              build_blocks(grid, m, fn, policy, zero_block), fn);
}

FourierLocalOperator FourierLocalOperator::vector_gradient_projector(
    const PeriodicGrid& grid, ZeroModePolicy policy) {
  const int d = grid.dim;
  const int m = d * d;
  DirectionBlock fn = [d](const Eigen::Vector3d& khat) {
    Eigen::VectorXd kh = khat.head(d);
    Matrix kk = (kh * kh.transpose()).cast<Complex>();
    Matrix b = Matrix::Zero(d * d, d * d);
    // row-major flattening v[i*d + j] = P_ij ; (P khat khat^T)_ij
    for (int i = 0; i < d; ++i)
      b.block(i * d, i * d, d, d) = kk;
    return b;
  };
  return FourierLocalOperator(grid, m, build_blocks(grid, m, fn, policy, nullptr),
                              fn);
}

FourierLocalOperator FourierLocalOperator::custom(const PeriodicGrid& grid,
                                                  int components,
                                                  const DirectionBlock& block,
                                                  ZeroModePolicy policy,
                                                  const Matrix* zero_block) {
  return FourierLocalOperator(
      grid, components, build_blocks(grid, components, block, policy, zero_block),
      block);
}

ComplexField FourierLocalOperator::apply(const ComplexField& f) const {
  if (f.shape() != shape())
    throw ConfigError("fourier-local operator applied to wrong field shape");
  Vector hat, out;
  fft_->forward(f.values(), hat);
  const int m = components_;
  for (Index k = 0; k < n_freq(); ++k)
    hat.segment(k * m, m) = (*blocks_)[k] * hat.segment(k * m, m);
  fft_->inverse(hat, out);
  return f.same_shape(std::move(out));
}

ComplexField FourierLocalOperator::apply_adjoint(const ComplexField& f) const {
  if (f.shape() != shape())
    throw ConfigError("fourier-local operator applied to wrong field shape");
  Vector hat, out;
  fft_->forward(f.values(), hat);
  const int m = components_;
  for (Index k = 0; k < n_freq(); ++k)
    hat.segment(k * m, m) = (*blocks_)[k].adjoint() * hat.segment(k * m, m);
  fft_->inverse(hat, out);
  return f.same_shape(std::move(out));
}

OperatorHandle FourierLocalOperator::to_handle() const {
  FourierLocalOperator self = *this;  // shares blocks and plans
  return OperatorHandle(
      shape(), OperatorTag::kFourierLocal,
      [self](const ComplexField& f) { return self.apply(f); },
      [self](const ComplexField& f) { return self.apply_adjoint(f); });
}

FourierLocalOperator FourierLocalOperator::complement() const {
  std::vector<Matrix> blocks;
  blocks.reserve(blocks_->size());
  const Matrix id = Matrix::Identity(components_, components_);
  for (const auto& b : *blocks_) blocks.push_back(id - b);
  DirectionBlock fn;
  if (direction_block_) {
    auto inner = direction_block_;
    const int m = components_;
    fn = [inner, m](const Eigen::Vector3d& khat) {
      return Matrix(Matrix::Identity(m, m) - inner(khat));
    };
  }
  return FourierLocalOperator(grid_, components_, std::move(blocks), fn);
}

double FourierLocalOperator::max_block_hermitian_defect() const {
  double worst = 0.0;
  for (const auto& b : *blocks_)
    worst = std::max(worst, (b - b.adjoint()).cwiseAbs().maxCoeff());
  return worst;
}

double FourierLocalOperator::max_block_idempotency_defect() const {
  double worst = 0.0;
  for (const auto& b : *blocks_)
    worst = std::max(worst, (b * b - b).cwiseAbs().maxCoeff());
  return worst;
}

Index FourierLocalOperator::total_rank(double tol) const {
  Index rank = 0;
  for (const auto& b : *blocks_) {
    Eigen::JacobiSVD<Matrix> svd(b);
    const auto& sv = svd.singularValues();
    const double top = sv.size() ? sv[0] : 0.0;
    for (Index i = 0; i < sv.size(); ++i)
      if (sv[i] > tol * std::max(top, 1.0)) ++rank;
  }
  return rank;
}

namespace {

/// Pseudo-inverse with the relative rank threshold used everywhere else.
Matrix pinv(const Matrix& a, Index* rank_out, double tol = 1e-10) {
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double top = sv.size() ? sv[0] : 0.0;
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(sv.size());
  Index rank = 0;
  for (Index i = 0; i < sv.size(); ++i) {
    if (sv[i] > tol * top) {
      inv[i] = 1.0 / sv[i];
      ++rank;
    }
  }
  if (rank_out) *rank_out = rank;
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
}

Index block_rank(const Matrix& b, double tol = 1e-10) {
  Eigen::JacobiSVD<Matrix> svd(b);
  const auto& sv = svd.singularValues();
  const double top = sv.size() ? sv[0] : 0.0;
  Index r = 0;
  for (Index i = 0; i < sv.size(); ++i)
    if (sv[i] > tol * std::max(top, 1.0)) ++r;
  return r;
}

}  // namespace

FourierLocalOperator build_gamma(const FourierLocalOperator& proj,
                                 const Matrix& l0) {
  const int m = proj.components();
  if (l0.rows() != m || l0.cols() != m)
    throw ConfigError("reference block must match projector components");

  // Scalar reference short-circuit keeps G = P/scalar exact.
  bool scalar = true;
  const Complex diag0 = l0(0, 0);
  for (Index i = 0; i < m && scalar; ++i)
    for (Index j = 0; j < m && scalar; ++j)
      if (l0(i, j) != ((i == j) ? diag0 : Complex(0.0))) scalar = false;

  std::vector<Matrix> blocks;
  blocks.reserve(static_cast<size_t>(proj.n_freq()));
  for (Index k = 0; k < proj.n_freq(); ++k) {
    const Matrix& p = proj.block(k);
    if (scalar) {
      blocks.push_back(p / diag0);
      continue;
    }
    const Matrix restricted = p * l0 * p;
    Index rank = 0;
    Matrix g = pinv(restricted, &rank);
    const Index prank = block_rank(p);
    if (!proj.grid().is_zero_freq(k) && rank != prank)
      throw SingularOperatorError(
          "reference kernel: restricted rank drop at frequency index " +
          std::to_string(k));
    blocks.push_back(p * g * p);
  }
  FourierLocalOperator::DirectionBlock fn;
  if (proj.direction_block()) {
    auto inner = proj.direction_block();
    if (scalar) {
      const Complex c = diag0;
      fn = [inner, c](const Eigen::Vector3d& khat) {
        return Matrix(inner(khat) / c);
      };
    } else {
      Matrix l0c = l0;
      fn = [inner, l0c](const Eigen::Vector3d& khat) {
        const Matrix p = inner(khat);
        Index rank = 0;
        return Matrix(p * pinv(p * l0c * p, &rank) * p);
      };
    }
  }
  return FourierLocalOperator(proj.grid(), m, std::move(blocks), fn);
}

double gamma_normalization_defect(const FourierLocalOperator& gamma,
                                  const Matrix& l0) {
  double worst = 0.0;
  for (Index k = 0; k < gamma.n_freq(); ++k) {
    const Matrix& g = gamma.block(k);
    worst = std::max(worst, (g * l0 * g - g).cwiseAbs().maxCoeff());
  }
  return worst;
}

}  // namespace rlab
