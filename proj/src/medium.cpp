#include "rlab/medium.hpp"

#include <algorithm>
#include <numeric>

namespace rlab {

LocalOperator medium_coefficient(const TwoPhaseMedium& medium) {
  const Index total = medium.grid.total_points();
  if (static_cast<Index>(medium.indicator.size()) != total)
    throw ConfigError("indicator raster does not match the grid");
  if (medium.phase1.rows() != medium.phase2.rows() ||
      medium.phase1.cols() != medium.phase2.cols() ||
      medium.phase1.rows() != medium.phase1.cols())
    throw ConfigError("phase blocks must be square and of equal size");
  std::vector<Matrix> blocks;
  blocks.reserve(static_cast<size_t>(total));
  for (Index p = 0; p < total; ++p)
    blocks.push_back(medium.indicator[static_cast<size_t>(p)] ? medium.phase1
                                                              : medium.phase2);
  return LocalOperator(medium.grid, medium.components(), std::move(blocks));
}

LocalOperator two_phase_B(const TwoPhaseMedium& medium) {
  return shift_minus(medium.z0, medium_coefficient(medium));
}

std::vector<std::uint8_t> checkerboard_indicator(const PeriodicGrid& grid) {
  const Index total = grid.total_points();
  std::vector<std::uint8_t> chi(static_cast<size_t>(total));
  for (Index p = 0; p < total; ++p) {
    auto idx = grid.unravel(p);
    int parity = 0;
    for (int a = 0; a < grid.dim; ++a) parity += idx[a];
    chi[static_cast<size_t>(p)] = static_cast<std::uint8_t>(parity % 2);
  }
  return chi;
}

std::vector<std::uint8_t> layered_indicator(const PeriodicGrid& grid, int axis,
                                            int period) {
  if (axis < 0 || axis >= grid.dim) throw ConfigError("layer axis out of range");
  if (period < 1) throw ConfigError("layer period must be positive");
  const Index total = grid.total_points();
  std::vector<std::uint8_t> chi(static_cast<size_t>(total));
  for (Index p = 0; p < total; ++p) {
    auto idx = grid.unravel(p);
    chi[static_cast<size_t>(p)] =
        static_cast<std::uint8_t>((idx[axis] / period) % 2);
  }
  return chi;
}

std::vector<std::uint8_t> random_indicator(const PeriodicGrid& grid,
                                           std::mt19937_64& rng) {
  const Index total = grid.total_points();
  std::vector<std::uint8_t> chi(static_cast<size_t>(total));
  std::uniform_int_distribution<int> coin(0, 1);
  for (auto& c : chi) c = static_cast<std::uint8_t>(coin(rng));
  return chi;
}

std::vector<std::uint8_t> balanced_random_indicator(const PeriodicGrid& grid,
                                                    std::mt19937_64& rng) {
  const Index total = grid.total_points();
  std::vector<std::uint8_t> chi(static_cast<size_t>(total), 0);
  std::fill(chi.begin(), chi.begin() + total / 2, std::uint8_t{1});
  std::shuffle(chi.begin(), chi.end(), rng);
  return chi;
}

double volume_fraction(const std::vector<std::uint8_t>& indicator) {
  if (indicator.empty()) return 0.0;
  const auto ones = std::accumulate(indicator.begin(), indicator.end(), 0l,
                                    [](long acc, std::uint8_t v) {
                                      return acc + (v ? 1 : 0);
                                    });
  return static_cast<double>(ones) / static_cast<double>(indicator.size());
}

}  // namespace rlab
