#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <complex>
#include <cstdio>
#include <filesystem>
#include <vector>

#include "json.hpp"
#include "rlab/dense.hpp"
#include "rlab/errors.hpp"
#include "rlab/io.hpp"
#include "rlab/local_op.hpp"
#include "rlab/medium.hpp"
#include "rlab/operator.hpp"
#include "rlab/projector.hpp"
#include "rlab/rng.hpp"
#include "test_util.hpp"

using namespace rlab;
using namespace rlab::testutil;

TEST_CASE("materialize: identity handle gives the identity matrix") {
  const FieldShape shape{3, 1};
  const Matrix m = materialize(OperatorHandle::identity(shape));
  CHECK(max_abs_diff(m, Matrix::Identity(3, 3)) == 0.0);
}

TEST_CASE("materialize: pointwise indicator multiplier is diagonal") {
  const PeriodicGrid grid(1, 4);
  const std::vector<std::uint8_t> chi{1, 0, 1, 0};
  std::vector<Matrix> blocks;
  for (auto v : chi)
    blocks.push_back(Matrix::Constant(1, 1, static_cast<double>(v)));
  const LocalOperator b(grid, 1, blocks);
  const Matrix m = materialize(b.to_handle());
  Matrix expect = Matrix::Zero(4, 4);
  for (int i = 0; i < 4; ++i) expect(i, i) = static_cast<double>(chi[i]);
  CHECK(max_abs_diff(m, expect) == 0.0);
}

TEST_CASE("materialize: composite equals the product of materialized factors") {
  Rng rng(11);
  const PeriodicGrid grid(1, 8);
  const auto proj = FourierLocalOperator::conductivity_projector(grid);
  std::vector<Matrix> blocks;
  for (Index p = 0; p < 8; ++p) blocks.push_back(rng.matrix(1, 1));
  const LocalOperator b(grid, 1, blocks);

  const OperatorHandle g = proj.to_handle();
  const OperatorHandle composite = compose(g, compose(b.to_handle(), g));
  const Matrix whole = materialize(composite);
  const Matrix product =
      materialize(g) * materialize(b.to_handle()) * materialize(g);
  CHECK(max_abs_diff(whole, product) < 1e-12);

  // The materialized matrix must reproduce the handle on random vectors.
  for (int t = 0; t < 5; ++t) {
    const ComplexField f = random_grid_field(rng, grid, 1);
    const Vector via_matrix = whole * f.values();
    const Vector via_handle = composite.apply(f).values();
    CHECK(rel_dev(via_matrix, via_handle) < 1e-12);
  }
}

TEST_CASE("materialize: refuses dimensions beyond the cap") {
  CHECK_THROWS_AS(materialize(OperatorHandle::identity({kDenseCap + 1, 1})),
                  DimensionCapError);
  CHECK_THROWS_AS(materialize(OperatorHandle::identity({8, 1}), 4),
                  DimensionCapError);
  CHECK_THROWS_AS(brute_force_spectrum(OperatorHandle::identity({8, 1}), 4),
                  DimensionCapError);
}

TEST_CASE("brute_force_spectrum: diagonal matrix with exact interval") {
  Matrix d = Matrix::Zero(3, 3);
  d(0, 0) = 1.0;
  d(1, 1) = 2.0;
  d(2, 2) = 3.0;
  const SpectrumResult res = brute_force_spectrum(OperatorHandle::dense(d));
  REQUIRE(res.eigenvalues.size() == 3);
  CHECK(res.hermitian);
  CHECK(std::abs(res.eigenvalues(0) - 1.0) < 1e-14);
  CHECK(std::abs(res.eigenvalues(1) - 2.0) < 1e-14);
  CHECK(std::abs(res.eigenvalues(2) - 3.0) < 1e-14);
  REQUIRE(res.interval.has_value());
  CHECK(res.interval->lo == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(res.interval->hi == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(res.interval->kind == SpectrumInterval::Kind::kExact);
}

TEST_CASE("brute_force_spectrum: rank-one restriction collapses to one value") {
  // Projector onto span{(1,1)/sqrt 2} and B = diag(0, 2): the restricted
  // block is the scalar (0 + 2)/2 = 1.
  Matrix g1(2, 2);
  g1 << 0.5, 0.5, 0.5, 0.5;
  Matrix b = Matrix::Zero(2, 2);
  b(1, 1) = 2.0;
  const OperatorHandle gh = OperatorHandle::dense(g1);
  const OperatorHandle a = compose(gh, compose(OperatorHandle::dense(b), gh));
  const SpectrumResult res = brute_force_spectrum_restricted(a, gh);
  REQUIRE(res.eigenvalues.size() == 1);
  CHECK(std::abs(res.eigenvalues(0) - 1.0) < 1e-12);
}

TEST_CASE("brute_force_spectrum: identity restriction changes nothing") {
  Rng rng(21);
  const Matrix h = rng.hermitian(8);
  const OperatorHandle op = OperatorHandle::dense(h);
  const SpectrumResult full = brute_force_spectrum(op);
  const SpectrumResult restricted = brute_force_spectrum_restricted(
      op, OperatorHandle::identity(op.shape()));
  REQUIRE(full.eigenvalues.size() == restricted.eigenvalues.size());
  for (Index i = 0; i < full.eigenvalues.size(); ++i)
    CHECK(std::abs(full.eigenvalues(i) - restricted.eigenvalues(i)) < 1e-10);
}

TEST_CASE("brute_force_spectrum: hermitian input yields a real spectrum") {
  Rng rng(22);
  const Matrix h = rng.hermitian(12);
  const SpectrumResult res = brute_force_spectrum(OperatorHandle::dense(h));
  CHECK(res.hermitian);
  double max_imag = 0.0;
  for (Index i = 0; i < res.eigenvalues.size(); ++i)
    max_imag = std::max(max_imag, std::abs(std::imag(res.eigenvalues(i))));
  CHECK(max_imag < 1e-10);
  // Oracle self-consistency against Eigen's selfadjoint solver directly.
  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  for (Index i = 0; i < h.rows(); ++i)
    CHECK(std::abs(std::real(res.eigenvalues(i)) - es.eigenvalues()(i)) <
          1e-10);
}

TEST_CASE("hermitian_part_definite: identity clears a half margin") {
  const DefinitenessReport rep =
      hermitian_part_definite(OperatorHandle::identity({4, 1}), 0.5);
  CHECK(rep.positive);
  CHECK(rep.min_eig == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("hermitian_part_definite: pure anti-Hermitian input scores zero") {
  Rng rng(31);
  const Matrix h = rng.hermitian(6);
  const Matrix ih = Complex(0.0, 1.0) * h;
  const DefinitenessReport rep = hermitian_part_definite(ih);
  CHECK(std::abs(rep.min_eig) <= 1e-14);
  CHECK_FALSE(rep.positive);  // margin 0 demands strictly positive
}

TEST_CASE("hermitian_part_definite: inverses keep a positive Hermitian part") {
  // If Herm(A) is positive definite then Herm(A^{-1}) is too; checked by
  // diagonalizing the Hermitian part of the dense inverse on random samples.
  Rng rng(32);
  for (int t = 0; t < 25; ++t) {
    const Matrix g = rng.matrix(6, 6);
    const Matrix anti = (g - g.adjoint()) / 2.0;
    Matrix herm = rng.hermitian(6);
    Eigen::SelfAdjointEigenSolver<Matrix> es(herm, Eigen::EigenvaluesOnly);
    herm += (std::abs(es.eigenvalues()(0)) + 0.5) * Matrix::Identity(6, 6);
    const Matrix a = herm + anti;
    REQUIRE(hermitian_part_definite(a).positive);
    const DefinitenessReport rep = hermitian_part_definite(a.inverse().eval());
    CHECK(rep.positive);
    CHECK(rep.min_eig > 0.0);
  }
}

TEST_CASE("subspace_inverse: identity projector gives the ordinary inverse") {
  Rng rng(41);
  const Matrix m = rng.matrix(6, 6) + 3.0 * Matrix::Identity(6, 6);
  const OperatorHandle inv = subspace_inverse(
      OperatorHandle::dense(m), OperatorHandle::identity({6, 1}));
  CHECK(rel_dev(materialize(inv), m.inverse().eval()) < 1e-12);
}

TEST_CASE("subspace_inverse: scaled identity collapses to projector over scalar") {
  Rng rng(42);
  const Complex z0(2.0, -1.0);
  const Matrix p = random_projector(rng, 7, 3);
  const OperatorHandle inv = subspace_inverse(
      OperatorHandle::scaled_identity({7, 1}, z0), OperatorHandle::dense(p));
  CHECK(max_abs_diff(materialize(inv), (p / z0).eval()) < 1e-12);
}

TEST_CASE("subspace_inverse: rank-one restriction with a hand value") {
  // Gamma1 spans (1,1)/sqrt 2 and L = diag(2,4): the restricted block is
  // (2+4)/2 = 3, so the inverse sends (1,1) to (1/3, 1/3).
  Matrix g1(2, 2);
  g1 << 0.5, 0.5, 0.5, 0.5;
  Matrix l = Matrix::Zero(2, 2);
  l(0, 0) = 2.0;
  l(1, 1) = 4.0;
  const OperatorHandle inv =
      subspace_inverse(OperatorHandle::dense(l), OperatorHandle::dense(g1));
  Vector ones(2);
  ones << 1.0, 1.0;
  const Vector out = inv.apply(ComplexField::abstract(ones)).values();
  CHECK(std::abs(out(0) - 1.0 / 3.0) < 1e-14);
  CHECK(std::abs(out(1) - 1.0 / 3.0) < 1e-14);

  // Oracle: pseudo-inverse of Gamma1 L Gamma1.
  const Matrix pinv =
      (g1 * l * g1).completeOrthogonalDecomposition().pseudoInverse();
  CHECK(max_abs_diff(materialize(inv), pinv) < 1e-12);
}

TEST_CASE("subspace_inverse: singular restriction is refused") {
  Matrix l = Matrix::Zero(2, 2);
  l(1, 1) = 1.0;  // restricted block contains an exact zero mode
  CHECK_THROWS_AS(subspace_inverse(OperatorHandle::dense(l),
                                   OperatorHandle::identity({2, 1})),
                  SingularOperatorError);
}

TEST_CASE("subspace_inverse: composed with the projected operator restores the projector") {
  Rng rng(43);
  const Matrix p = random_projector(rng, 9, 5);
  const Matrix op = rng.matrix(9, 9) + 3.0 * Matrix::Identity(9, 9);
  const Matrix x = subspace_inverse_dense(op, p);
  CHECK(max_abs_diff((x * (p * op * p) * p).eval(), p) < 1e-10);
  // ... and annihilates the orthogonal complement of range(P).
  const Matrix complement = Matrix::Identity(9, 9) - p;
  CHECK(max_abs((x * complement).eval()) < 1e-10);
}

TEST_CASE("adjoint consistency holds for every shipped handle kind") {
  Rng rng(51);
  const PeriodicGrid grid(1, 8);
  const auto proj = FourierLocalOperator::conductivity_projector(grid);
  std::vector<Matrix> bblocks;
  for (Index p = 0; p < 8; ++p) bblocks.push_back(rng.matrix(1, 1));
  const LocalOperator b(grid, 1, bblocks);
  const OperatorHandle g = proj.to_handle();

  std::vector<OperatorHandle> handles{
      OperatorHandle::dense(rng.matrix(8, 8), grid.shape(1)),
      b.to_handle(),
      g,
      compose(g, compose(b.to_handle(), g)),
      scale(Complex(0.3, -1.1), adjoint_of(b.to_handle())),
  };
  for (const OperatorHandle& op : handles) {
    double worst = 0.0;
    for (int t = 0; t < 100; ++t) {
      const ComplexField p = random_grid_field(rng, grid, 1);
      const ComplexField q = random_grid_field(rng, grid, 1);
      const Complex lhs = inner_product(op.apply(p), q);
      const Complex rhs = inner_product(p, op.apply_adjoint(q));
      worst = std::max(worst,
                       std::abs(lhs - rhs) / (field_norm(p) * field_norm(q)));
    }
    CHECK(worst < 1e-10);
  }
}

TEST_CASE("projector laws hold for the shipped projector families") {
  const PeriodicGrid g2(2, 8);
  const PeriodicGrid g4(2, 4);
  const auto cond = FourierLocalOperator::conductivity_projector(g2);
  const auto vgrad = FourierLocalOperator::vector_gradient_projector(g4);
  for (const auto& fam : {cond, vgrad}) {
    CHECK(fam.max_block_hermitian_defect() < 1e-12);
    CHECK(fam.max_block_idempotency_defect() < 1e-12);
    const Matrix m = materialize(fam.to_handle());
    CHECK(max_abs_diff((m * m).eval(), m) < 1e-12);
    CHECK(max_abs_diff(m.adjoint().eval(), m) < 1e-12);
    const Matrix c = materialize(fam.complement().to_handle());
    CHECK(max_abs_diff((c * c).eval(), c) < 1e-12);
    CHECK(max_abs_diff((m + c).eval(),
                       Matrix::Identity(m.rows(), m.cols())) < 1e-12);
  }
}

TEST_CASE("dense binary format round trips matrices exactly") {
  namespace fs = std::filesystem;
  Rng rng(61);
  const fs::path dir = fs::temp_directory_path() / "rlab_io_test";
  fs::create_directories(dir);

  const Matrix m = rng.matrix(5, 3);
  write_matrix(dir / "m.rlab", m);
  const Matrix back = read_matrix(dir / "m.rlab");
  REQUIRE(back.rows() == 5);
  REQUIRE(back.cols() == 3);
  CHECK(max_abs_diff(back, m) == 0.0);

  const PeriodicGrid grid(2, 4);
  const ComplexField f = grid_field(grid, 2, rng.vector(32));
  write_field(dir / "f.rlab", f);
  const ComplexField fback = read_field(dir / "f.rlab", grid.weight());
  CHECK(fback.shape() == f.shape());
  CHECK((fback.values() - f.values()).norm() == 0.0);

  // The two layouts are distinguishable: a field snapshot refuses to load as
  // a plain matrix and vice versa.
  CHECK_THROWS_AS(read_matrix(dir / "f.rlab"), ConfigError);
  CHECK_THROWS_AS(read_field(dir / "m.rlab"), ConfigError);
  CHECK_THROWS_AS(read_matrix(dir / "missing.rlab"), ConfigError);
  fs::remove_all(dir);
}

TEST_CASE("json debug export mirrors the entries") {
  Matrix m(2, 2);
  m << Complex(1.0, -2.0), Complex(0.0, 0.5), Complex(-3.25, 0.0),
      Complex(7.0, 7.0);
  const auto j = nlohmann::json::parse(matrix_to_json(m));
  REQUIRE(j.size() == 2);
  REQUIRE(j[0].size() == 2);
  CHECK(j[0][0][0].get<double>() == 1.0);
  CHECK(j[0][0][1].get<double>() == -2.0);
  CHECK(j[1][1][0].get<double>() == 7.0);
  CHECK(j[0][1][1].get<double>() == 0.5);
}

TEST_CASE("seeded draws are reproducible and Haar frames are unitary") {
  Rng a(7), b(7);
  const Matrix ma = a.matrix(4, 4);
  const Matrix mb = b.matrix(4, 4);
  CHECK(max_abs_diff(ma, mb) == 0.0);
  const Matrix u = a.haar_unitary(6);
  CHECK(max_abs_diff((u.adjoint() * u).eval(), Matrix::Identity(6, 6)) <
        1e-12);
}
