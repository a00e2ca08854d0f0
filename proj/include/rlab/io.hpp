#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "rlab/field.hpp"
#include "rlab/grid.hpp"

namespace rlab {

/// Dense complex binary format: 16-byte header "RLAB" + u32 rows + u32 cols
/// + u32 extra, then row-major little-endian f64 (re, im) pairs.  extra is 0
/// for plain matrices and the components-per-point count for field
/// snapshots (rows = points, cols = components).
void write_matrix(const std::filesystem::path& path, const Matrix& m);
Matrix read_matrix(const std::filesystem::path& path);

void write_field(const std::filesystem::path& path, const ComplexField& f);
ComplexField read_field(const std::filesystem::path& path,
                        double weight = 1.0);

/// Phase raster: "CHI0" + u32 dim + u32 samples-per-axis, then one byte per
/// grid point, each 0 or 1.
void write_indicator(const std::filesystem::path& path,
                     const PeriodicGrid& grid,
                     const std::vector<std::uint8_t>& indicator);
std::pair<PeriodicGrid, std::vector<std::uint8_t>> read_indicator(
    const std::filesystem::path& path);

/// Debug export: nested JSON arrays of [re, im] entries.
std::string matrix_to_json(const Matrix& m);

}  // namespace rlab
