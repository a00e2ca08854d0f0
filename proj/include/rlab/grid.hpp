#pragma once

#include <array>
#include <cmath>

#include "rlab/field.hpp"

namespace rlab {

/// Uniform periodic sampling of a d-dimensional cell, N samples per axis.
/// N must be a power of two.  Flat point order is row-major with the last
/// axis fastest (the FFT layout).  Frequencies are the standard signed FFT
/// set; the Nyquist index maps to -N/2 and k = 0 appears exactly once.
struct PeriodicGrid {
  int dim = 1;
  int n = 1;
  std::array<double, 3> lengths{1.0, 1.0, 1.0};

  PeriodicGrid() = default;
  PeriodicGrid(int dim_, int n_, std::array<double, 3> lengths_ = {1., 1., 1.})
      : dim(dim_), n(n_), lengths(lengths_) {
    if (dim < 1 || dim > 3) throw ConfigError("grid dimension must be 1..3");
    if (n < 2 || (n & (n - 1)) != 0)
      throw ConfigError("grid samples per axis must be a power of two");
    for (int a = 0; a < dim; ++a)
      if (!(lengths[a] > 0)) throw ConfigError("cell lengths must be positive");
  }

  Index total_points() const {
    Index t = 1;
    for (int a = 0; a < dim; ++a) t *= n;
    return t;
  }

  FieldShape shape(Index components) const { return {total_points(), components}; }

  double volume() const {
    double v = 1.0;
    for (int a = 0; a < dim; ++a) v *= lengths[a];
    return v;
  }

  /// Quadrature weight per sample: cell volume over sample count.
  double weight() const {
    return volume() / static_cast<double>(total_points());
  }

  std::array<int, 3> unravel(Index p) const {
    std::array<int, 3> idx{0, 0, 0};
    for (int a = dim - 1; a >= 0; --a) {
      idx[a] = static_cast<int>(p % n);
      p /= n;
    }
    return idx;
  }

  Index ravel(const std::array<int, 3>& idx) const {
    Index p = 0;
    for (int a = 0; a < dim; ++a) p = p * n + ((idx[a] % n + n) % n);
    return p;
  }

  int signed_freq(int index) const { return index < n / 2 ? index : index - n; }

  std::array<int, 3> int_freq(Index flat) const {
    auto idx = unravel(flat);
    for (int a = 0; a < dim; ++a) idx[a] = signed_freq(idx[a]);
    return idx;
  }

  bool is_zero_freq(Index flat) const { return flat == 0; }

  /// k = 2 pi * integer frequency / cell length, zero-padded to 3 entries.
  Eigen::Vector3d kvec(Index flat) const {
    auto f = int_freq(flat);
    Eigen::Vector3d k = Eigen::Vector3d::Zero();
    for (int a = 0; a < dim; ++a)
      k[a] = 2.0 * M_PI * static_cast<double>(f[a]) / lengths[a];
    return k;
  }

  bool operator==(const PeriodicGrid&) const = default;
};

}  // namespace rlab
