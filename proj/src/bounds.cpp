#include "rlab/bounds.hpp"

#include <cmath>
#include <limits>

#include "rlab/errors.hpp"
#include "rlab/rng.hpp"

namespace rlab {
namespace {

double herm_min_eig(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(((a + a.adjoint()) / 2.0).eval(),
                                           Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

double herm_max_eig(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(((a + a.adjoint()) / 2.0).eval(),
                                           Eigen::EigenvaluesOnly);
  return es.eigenvalues()(es.eigenvalues().size() - 1);
}

/// Smallest eigenvalue of Herm(T) compressed to the range of a Hermitian
/// idempotent block.  The complement contributes structural zeros to P T P
/// that say nothing about convexity, so they are excluded: the returned value
/// is the actual margin on the constrained directions.  +inf for a rank-zero
/// block (no constrained directions at that frequency).
double range_restricted_min_eig(const Matrix& p, const Matrix& t) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(p);
  const Index n = p.rows();
  Index rank = 0;
  for (Index i = 0; i < n; ++i)
    if (es.eigenvalues()(i) > 0.5) ++rank;
  if (rank == 0) return std::numeric_limits<double>::infinity();
  const Matrix q = es.eigenvectors().rightCols(rank);
  return herm_min_eig(q.adjoint() * t * q);
}

Matrix block_diag(const Matrix& a, Index copies) {
  const Index m = a.rows();
  Matrix out = Matrix::Zero(m * copies, m * copies);
  for (Index i = 0; i < copies; ++i)
    out.block(i * m, i * m, m, m) = a;
  return out;
}

ComplexField apply_restricted(const OperatorHandle& gamma1,
                              const OperatorHandle& b, const ComplexField& f) {
  return gamma1.apply(b.apply(gamma1.apply(f)));
}

}  // namespace

RayleighRitzResult rayleigh_ritz(const OperatorHandle& gamma1,
                                 const OperatorHandle& b,
                                 const std::vector<ComplexField>& basis) {
  if (basis.empty()) throw ConfigError("rayleigh_ritz: empty basis");
  const FieldShape shape = gamma1.shape();
  const Index n = shape.dim();
  const double weight = basis.front().weight();

  Matrix cols(n, static_cast<Index>(basis.size()));
  for (std::size_t i = 0; i < basis.size(); ++i)
    cols.col(static_cast<Index>(i)) = gamma1.apply(basis[i]).values();

  Eigen::ColPivHouseholderQR<Matrix> qr(cols);
  qr.setThreshold(1e-10);
  const Index rank = qr.rank();
  if (rank == 0)
    throw ConfigError("rayleigh_ritz: basis is empty after projection");
  const Matrix q = qr.householderQ() * Matrix::Identity(n, rank);

  Matrix aq(n, rank);
  for (Index i = 0; i < rank; ++i) {
    ComplexField qi(shape, q.col(i), weight);
    aq.col(i) = apply_restricted(gamma1, b, qi).values();
  }
  const Matrix ritz = q.adjoint() * aq;
  const double scale = std::max(ritz.cwiseAbs().maxCoeff(), 1e-300);
  if ((ritz - ritz.adjoint()).cwiseAbs().maxCoeff() > 1e-8 * scale)
    throw NumericalAssertion(
        "rayleigh_ritz: restricted operator is not Hermitian; inner bounds "
        "need a real spectrum");

  Eigen::SelfAdjointEigenSolver<Matrix> es(((ritz + ritz.adjoint()) / 2.0).eval());
  RayleighRitzResult out;
  out.subspace_dim = rank;
  out.c_minus = es.eigenvalues()(0);
  out.c_plus = es.eigenvalues()(rank - 1);

  ComplexField smin(shape, q * es.eigenvectors().col(0), weight);
  ComplexField splus(shape, q * es.eigenvectors().col(rank - 1), weight);
  const double nmin = field_norm(smin);
  const double nplus = field_norm(splus);
  out.s_minus = smin.same_shape(smin.values() / nmin);
  out.s_plus = splus.same_shape(splus.values() / nplus);
  return out;
}

PowerRefineResult power_refine(const OperatorHandle& gamma1,
                               const OperatorHandle& b,
                               const RayleighRitzResult& rr, int n,
                               const std::optional<SpectrumInterval>& outer) {
  if (n < 2 || n % 2 != 0)
    throw ConfigError("power_refine: n must be an even integer >= 2");

  auto power_term = [&](const ComplexField& s, double center) {
    ComplexField w = s;
    for (int i = 0; i < n; ++i) {
      ComplexField aw = apply_restricted(gamma1, b, w);
      w = w.same_shape(aw.values() - center * w.values());
    }
    const double form = std::abs(inner_product(s, w));
    return std::pow(form, 1.0 / static_cast<double>(n));
  };

  PowerRefineResult out;
  out.n = n;
  out.interval.kind = SpectrumInterval::Kind::kInner;
  out.interval.hi = rr.c_minus + power_term(rr.s_plus, rr.c_minus);
  out.interval.lo = rr.c_plus - power_term(rr.s_minus, rr.c_plus);

  if (outer) {
    const double width = rr.c_plus - rr.c_minus;
    out.valid_plus = width > (rr.c_minus - outer->lo);
    out.valid_minus = width > (outer->hi - rr.c_plus);
    out.provisional = !(out.valid_plus && out.valid_minus);
  }
  return out;
}

QstarCheck qstar_check(const Matrix& t_block, const FourierLocalOperator& proj,
                       int sphere_samples, std::uint64_t seed) {
  const int m = proj.components();
  if (t_block.rows() != m || t_block.cols() != m)
    throw ConfigError("qstar_check: translation block size mismatch");

  QstarCheck out;
  out.label = "grid-certified";
  double mn = std::numeric_limits<double>::infinity();
  for (Index flat = 0; flat < proj.n_freq(); ++flat)
    mn = std::min(mn, range_restricted_min_eig(proj.block(flat), t_block));
  if (!std::isfinite(mn)) mn = 0.0;  // every block rank zero: vacuous
  out.min_eig = mn;

  double overall = mn;
  if (sphere_samples > 0 && proj.direction_block()) {
    Rng rng(seed);
    const int d = proj.grid().dim;
    double sm = std::numeric_limits<double>::infinity();
    for (int trial = 0; trial < sphere_samples; ++trial) {
      Eigen::Vector3d khat = Eigen::Vector3d::Zero();
      double norm = 0.0;
      while (norm < 1e-8) {
        for (int a = 0; a < d; ++a) khat[a] = rng.gaussian();
        norm = khat.norm();
      }
      khat /= norm;
      const Matrix p = proj.direction_block()(khat);
      sm = std::min(sm, range_restricted_min_eig(p, t_block));
    }
    if (!std::isfinite(sm)) sm = 0.0;
    out.sphere_min = sm;
    out.label = "sphere-sampled";
    overall = std::min(overall, sm);
  }
  out.certified = overall >= -1e-10;
  return out;
}

QstarCheck qstar_check_materialized(const OperatorHandle& t,
                                    const OperatorHandle& gamma1,
                                    Index cap) {
  const Matrix g = materialize(gamma1, cap);
  const Matrix tm = materialize(t, cap);
  const Matrix q = projector_range_basis(g);
  QstarCheck out;
  out.label = "materialized";
  if (q.cols() == 0) {
    out.min_eig = 0.0;  // nothing constrained: vacuously certified
    out.certified = true;
    return out;
  }
  out.min_eig = herm_min_eig(q.adjoint() * tm * q);
  out.certified = out.min_eig >= -1e-10;
  return out;
}

TranslationCertificate translation_bounds(const LocalOperator& b,
                                          const Matrix& t_minus,
                                          const QstarCheck& cert_minus,
                                          const Matrix& t_plus,
                                          const QstarCheck& cert_plus) {
  if (!cert_minus.certified || !cert_plus.certified)
    throw ConfigError(
        "translation_bounds: translation is not certified Q*-convex");
  const int m = b.components();
  if (t_minus.rows() != m || t_plus.rows() != m)
    throw ConfigError("translation_bounds: block size mismatch");

  TranslationCertificate out;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (Index p = 0; p < b.points(); ++p) {
    lo = std::min(lo, herm_min_eig(b.block(p) - t_minus));
    hi = std::max(hi, herm_max_eig(b.block(p) + t_plus));
  }
  out.a_minus = lo;
  out.a_plus = hi;
  out.k_sample_min = std::min(cert_minus.min_eig, cert_plus.min_eig);
  out.label = cert_minus.label == cert_plus.label
                  ? cert_minus.label
                  : cert_minus.label + "+" + cert_plus.label;
  return out;
}

CoupledCertificate coupled_translation(const LocalOperator& b,
                                       const FourierLocalOperator& proj,
                                       const Matrix& l0, const Matrix& v) {
  const int m = proj.components();
  if (b.components() != m)
    throw ConfigError("coupled_translation: component mismatch");
  if (v.rows() != m || v.cols() < 1)
    throw ConfigError("coupled_translation: V must have one column per copy");
  if (v.norm() == 0.0) throw ConfigError("coupled_translation: V is zero");
  const Index ell = v.cols();

  // Coupling constant from the reference kernel blocks, zero mode excluded
  // (projected fields have no mean component to couple).
  const FourierLocalOperator gamma = build_gamma(proj, l0);
  double kmin = std::numeric_limits<double>::infinity();
  for (Index flat = 1; flat < gamma.n_freq(); ++flat) {
    double sum = 0.0;
    for (Index i = 0; i < ell; ++i)
      sum += std::real(Complex(v.col(i).adjoint() * gamma.block(flat) *
                               v.col(i)));
    kmin = std::min(kmin, sum);
  }
  if (!(kmin > 1e-12 * v.squaredNorm()))
    throw NumericalAssertion(
        "coupled_translation: the direction sum vanishes at some frequency, "
        "so no finite coupling certifies");

  CoupledCertificate out;
  out.ell = ell;
  out.k_grid_min = kmin;
  out.nu = 1.0 / kmin;

  Vector vstack(ell * m);
  for (Index i = 0; i < ell; ++i) vstack.segment(i * m, m) = v.col(i);
  Matrix t_block = block_diag(l0, ell);
  t_block -= out.nu * (vstack * vstack.adjoint());

  double qmin = std::numeric_limits<double>::infinity();
  for (Index flat = 0; flat < proj.n_freq(); ++flat) {
    const Matrix g1 = block_diag(proj.block(flat), ell);
    qmin = std::min(qmin, herm_min_eig(g1 * t_block * g1));
  }
  out.block_qstar_min = qmin;

  double lo = std::numeric_limits<double>::infinity();
  for (Index p = 0; p < b.points(); ++p)
    lo = std::min(lo, herm_min_eig(block_diag(b.block(p), ell) - t_block));
  out.a_minus = lo;
  return out;
}

SectorBound sector_bound(const LocalOperator& b, double theta, const Matrix& t,
                         const QstarCheck& cert) {
  if (!cert.certified)
    throw ConfigError("sector_bound: translation is not certified Q*-convex");
  const Complex phase = std::exp(Complex(0.0, theta));
  double lo = std::numeric_limits<double>::infinity();
  for (Index p = 0; p < b.points(); ++p)
    lo = std::min(lo, herm_min_eig(phase * b.block(p) - t));
  return SectorBound{theta, lo};
}

}  // namespace rlab
