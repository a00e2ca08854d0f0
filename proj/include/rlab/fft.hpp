#pragma once

#include <memory>

#include "rlab/grid.hpp"

namespace rlab {

/// Batched d-dimensional FFT over a periodic grid: one transform per field
/// component, layout point-major with components fastest.  Plans are created
/// once (FFTW, estimate mode, unaligned) and are safe to execute from several
/// threads via the new-array interface.  Transforms are unnormalized; the
/// inverse carries the 1/N^d factor so forward-then-inverse is the identity.
class Fft {
 public:
  Fft(const PeriodicGrid& grid, int components);
  ~Fft();
  Fft(const Fft&) = delete;
  Fft& operator=(const Fft&) = delete;

  const PeriodicGrid& grid() const { return grid_; }
  int components() const { return components_; }

  /// out[k, c] = sum_x e^{-i k.x} in[x, c]
  void forward(const Vector& in, Vector& out) const;
  /// out[x, c] = (1/N^d) sum_k e^{+i k.x} in[k, c]
  void inverse(const Vector& in, Vector& out) const;

 private:
  PeriodicGrid grid_;
  int components_;
  struct Plans;
  std::unique_ptr<Plans> plans_;
};

}  // namespace rlab
