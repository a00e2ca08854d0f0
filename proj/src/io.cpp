#include "rlab/io.hpp"

#include <cstring>
#include <fstream>

#include "json.hpp"
#include "rlab/errors.hpp"

namespace rlab {
namespace {

constexpr char kMatrixMagic[4] = {'R', 'L', 'A', 'B'};
constexpr char kRasterMagic[4] = {'C', 'H', 'I', '0'};

void put_u32(std::ostream& out, std::uint32_t v) {
  unsigned char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t get_u32(std::istream& in) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= std::uint32_t(b[i]) << (8 * i);
  return v;
}

void put_f64(std::ostream& out, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, 8);
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(bits >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), 8);
}

double get_f64(std::istream& in) {
  unsigned char b[8];
  in.read(reinterpret_cast<char*>(b), 8);
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= std::uint64_t(b[i]) << (8 * i);
  double v;
  std::memcpy(&v, &bits, 8);
  return v;
}

void write_rlab(const std::filesystem::path& path, const Matrix& m,
                std::uint32_t extra) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open for writing: " + path.string());
  out.write(kMatrixMagic, 4);
  put_u32(out, static_cast<std::uint32_t>(m.rows()));
  put_u32(out, static_cast<std::uint32_t>(m.cols()));
  put_u32(out, extra);
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) {
      put_f64(out, m(i, j).real());
      put_f64(out, m(i, j).imag());
    }
  if (!out) throw ConfigError("short write: " + path.string());
}

struct RlabPayload {
  Matrix data;
  std::uint32_t extra = 0;
};

RlabPayload read_rlab(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open for reading: " + path.string());
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMatrixMagic, 4) != 0)
    throw ConfigError("not a dense complex snapshot: " + path.string());
  const std::uint32_t rows = get_u32(in);
  const std::uint32_t cols = get_u32(in);
  const std::uint32_t extra = get_u32(in);
  RlabPayload payload;
  payload.extra = extra;
  payload.data.resize(rows, cols);
  for (std::uint32_t i = 0; i < rows; ++i)
    for (std::uint32_t j = 0; j < cols; ++j) {
      const double re = get_f64(in);
      const double im = get_f64(in);
      payload.data(i, j) = Complex(re, im);
    }
  if (!in) throw ConfigError("truncated snapshot: " + path.string());
  return payload;
}

}  // namespace

void write_matrix(const std::filesystem::path& path, const Matrix& m) {
  write_rlab(path, m, 0);
}

Matrix read_matrix(const std::filesystem::path& path) {
  RlabPayload payload = read_rlab(path);
  if (payload.extra != 0)
    throw ConfigError("snapshot holds a field, not a matrix: " + path.string());
  return std::move(payload.data);
}

void write_field(const std::filesystem::path& path, const ComplexField& f) {
  const Index points = f.shape().points;
  const Index comps = f.shape().components;
  Matrix m(points, comps);
  for (Index p = 0; p < points; ++p)
    for (Index c = 0; c < comps; ++c) m(p, c) = f.at(p, c);
  write_rlab(path, m, static_cast<std::uint32_t>(comps));
}

ComplexField read_field(const std::filesystem::path& path, double weight) {
  RlabPayload payload = read_rlab(path);
  if (payload.extra == 0 ||
      payload.extra != static_cast<std::uint32_t>(payload.data.cols()))
    throw ConfigError("snapshot is not a field: " + path.string());
  const Index points = payload.data.rows();
  const Index comps = payload.data.cols();
  Vector flat(points * comps);
  for (Index p = 0; p < points; ++p)
    for (Index c = 0; c < comps; ++c) flat[p * comps + c] = payload.data(p, c);
  return ComplexField(FieldShape{points, comps}, std::move(flat), weight);
}

void write_indicator(const std::filesystem::path& path,
                     const PeriodicGrid& grid,
                     const std::vector<std::uint8_t>& indicator) {
  if (static_cast<Index>(indicator.size()) != grid.total_points())
    throw ConfigError("indicator length does not match the grid");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open for writing: " + path.string());
  out.write(kRasterMagic, 4);
  put_u32(out, static_cast<std::uint32_t>(grid.dim));
  put_u32(out, static_cast<std::uint32_t>(grid.n));
  for (std::uint8_t v : indicator) {
    if (v > 1) throw ConfigError("indicator entries must be 0 or 1");
    out.put(static_cast<char>(v));
  }
  if (!out) throw ConfigError("short write: " + path.string());
}

std::pair<PeriodicGrid, std::vector<std::uint8_t>> read_indicator(
    const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open for reading: " + path.string());
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kRasterMagic, 4) != 0)
    throw ConfigError("not a phase raster: " + path.string());
  const int dim = static_cast<int>(get_u32(in));
  const int n = static_cast<int>(get_u32(in));
  PeriodicGrid grid(dim, n);  // rasters carry geometry, not cell lengths
  std::vector<std::uint8_t> indicator(grid.total_points());
  in.read(reinterpret_cast<char*>(indicator.data()),
          static_cast<std::streamsize>(indicator.size()));
  if (!in) throw ConfigError("truncated raster: " + path.string());
  for (std::uint8_t v : indicator)
    if (v > 1) throw ConfigError("raster entries must be 0 or 1");
  return {grid, std::move(indicator)};
}

std::string matrix_to_json(const Matrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Index j = 0; j < m.cols(); ++j)
      row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows.dump();
}

}  // namespace rlab
