#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "rlab/local_op.hpp"

namespace rlab {

/// Two-phase coefficient field: indicator raster chi(x) in {0,1} picking
/// between two constant blocks, plus the spectral-parameter origin z0 that
/// turns the coefficient L(x) into the multiplier B(x) = z0 I - L(x).
struct TwoPhaseMedium {
  PeriodicGrid grid;
  std::vector<std::uint8_t> indicator;  // 1 = phase one
  Matrix phase1;                        // block where indicator = 1
  Matrix phase2;                        // block where indicator = 0
  Complex z0 = 1.0;

  int components() const { return static_cast<int>(phase1.rows()); }
};

/// L(x): the raw coefficient field.
LocalOperator medium_coefficient(const TwoPhaseMedium& medium);
/// B(x) = z0 I - L(x): the multiplier the projected problems act with.
LocalOperator two_phase_B(const TwoPhaseMedium& medium);

// --- indicator rasters -------------------------------------------------------
std::vector<std::uint8_t> checkerboard_indicator(const PeriodicGrid& grid);
std::vector<std::uint8_t> layered_indicator(const PeriodicGrid& grid, int axis,
                                            int period);
std::vector<std::uint8_t> random_indicator(const PeriodicGrid& grid,
                                           std::mt19937_64& rng);
/// Exactly half the points in phase one (random subset).
std::vector<std::uint8_t> balanced_random_indicator(const PeriodicGrid& grid,
                                                    std::mt19937_64& rng);

double volume_fraction(const std::vector<std::uint8_t>& indicator);

}  // namespace rlab
