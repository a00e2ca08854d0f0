#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "rlab/fft.hpp"
#include "rlab/operator.hpp"

namespace rlab {

enum class ZeroModePolicy { kAnnihilate, kIdentity, kCustom };

/// Operator acting as a small m x m block at each grid frequency:
/// apply = FFT -> per-k block multiply -> inverse FFT.  Used both for the
/// subspace projectors (conductivity, vector-gradient, custom) and for the
/// reference-medium kernels derived from them.
class FourierLocalOperator {
 public:
  using DirectionBlock = std::function<Matrix(const Eigen::Vector3d& khat)>;

  FourierLocalOperator() = default;
  FourierLocalOperator(const PeriodicGrid& grid, int components,
                       std::vector<Matrix> blocks,
                       DirectionBlock direction_block = nullptr);

  // --- projector catalog ---------------------------------------------------
  /// Orthogonal projector onto zero-curl vector fields (k-parallel in Fourier
  /// space), m = d.  The zero mode is annihilated unless told otherwise.
  static FourierLocalOperator conductivity_projector(
      const PeriodicGrid& grid, ZeroModePolicy policy = ZeroModePolicy::kAnnihilate,
      const Matrix* zero_block = nullptr);

  /// Projector onto gradients of vector potentials acting on d x d matrix
  /// fields (row-major flattening, m = d^2): P |-> P khat khat^T per mode.
  static FourierLocalOperator vector_gradient_projector(
      const PeriodicGrid& grid, ZeroModePolicy policy = ZeroModePolicy::kAnnihilate);

  /// Arbitrary per-direction block family (must be supplied for every k).
  static FourierLocalOperator custom(
      const PeriodicGrid& grid, int components, const DirectionBlock& block,
      ZeroModePolicy policy = ZeroModePolicy::kAnnihilate,
      const Matrix* zero_block = nullptr);

  // --- access --------------------------------------------------------------
  const PeriodicGrid& grid() const { return grid_; }
  int components() const { return components_; }
  Index n_freq() const { return static_cast<Index>(blocks_->size()); }
  const Matrix& block(Index flat) const { return (*blocks_)[flat]; }
  /// Present for catalog families that are pure functions of the direction;
  /// lets certificates refine grid minima by sphere sampling.
  const DirectionBlock& direction_block() const { return direction_block_; }

  ComplexField apply(const ComplexField& f) const;
  ComplexField apply_adjoint(const ComplexField& f) const;
  OperatorHandle to_handle() const;
  FieldShape shape() const { return grid_.shape(components_); }

  /// Complementary family I - blocks (for a projector: the projector onto the
  /// orthogonal complement).
  FourierLocalOperator complement() const;

  // --- diagnostics ---------------------------------------------------------
  double max_block_hermitian_defect() const;  // max over k of |B - B^H|_inf
  double max_block_idempotency_defect() const;  // max over k of |B^2 - B|_inf
  Index total_rank(double tol = 1e-10) const;   // sum of per-k ranks

 private:
  PeriodicGrid grid_;
  int components_ = 0;
  std::shared_ptr<std::vector<Matrix>> blocks_;
  DirectionBlock direction_block_;
  std::shared_ptr<Fft> fft_;
};

/// Reference kernel: per mode, G(k) = P(k) [P(k) L0 P(k)]^+ P(k) where the
/// pseudo-inverse acts on range(P(k)).  L0 is one constant block, Hermitian
/// positive definite in the guaranteed regime (any invertible block accepted;
/// scalar multiples of the identity short-circuit to P(k)/scalar exactly).
/// Throws SingularOperatorError when the restricted rank drops below the
/// projector rank at some nonzero frequency.
FourierLocalOperator build_gamma(const FourierLocalOperator& proj,
                                 const Matrix& l0);

/// max over k of |G(k) L0 G(k) - G(k)|_inf — the kernel normalization law.
double gamma_normalization_defect(const FourierLocalOperator& gamma,
                                  const Matrix& l0);

}  // namespace rlab
