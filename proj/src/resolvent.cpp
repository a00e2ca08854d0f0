#include "rlab/resolvent.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "rlab/errors.hpp"

namespace rlab {
namespace {

constexpr double kTiny = 1e-300;

double true_residual(const ResolventProblem& prob, const ComplexField& e,
                     const ComplexField& s, double s_norm) {
  ComplexField le = e.same_shape(prob.z0 * e.values() -
                                 prob.b.apply(e).values());
  ComplexField j = e.same_shape(le.values() - s.values());
  return field_norm(prob.gamma1.apply(j)) / std::max(s_norm, kTiny);
}

ComplexField neumann_solve(const ResolventProblem& prob, const ComplexField& s,
                           const SolveOptions& opts, int& iterations) {
  const OperatorHandle gamma =
      opts.gamma ? *opts.gamma : scale(1.0 / prob.z0, prob.gamma1);
  // Multiplier of the fixed point: L0 - L.  With the z0 I reference this is
  // exactly B, so avoid the extra handle applications in that case.
  auto apply_shift = [&](const ComplexField& f) {
    if (!opts.l0) return prob.b.apply(f);
    return f.same_shape(opts.l0->apply(f).values() - prob.z0 * f.values() +
                        prob.b.apply(f).values());
  };

  const ComplexField gs = gamma.apply(s);
  const double base = field_norm(gs);
  const double s_norm = field_norm(s);
  ComplexField e = gs;
  if (base == 0.0) {
    iterations = 0;
    return e;
  }
  constexpr int kWindow = 25;
  std::vector<double> deltas;
  deltas.reserve(256);
  for (int iter = 1; iter <= opts.max_iterations; ++iter) {
    ComplexField next =
        e.same_shape(gs.values() + gamma.apply(apply_shift(e)).values());
    const double delta =
        (next.values() - e.values()).norm() / std::max(base, kTiny);
    e = std::move(next);
    iterations = iter;
    deltas.push_back(delta);
    if (delta <= opts.tol || iter % 16 == 0) {
      if (true_residual(prob, e, s, s_norm) <= opts.tol) return e;
    }
    const int k = static_cast<int>(deltas.size());
    if (k > 2 * kWindow && deltas[k - 1] >= deltas[k - 1 - kWindow])
      throw NumericalAssertion(
          "fixed-point iteration is not contracting; choose a reference with "
          "larger |z0| (or switch to the krylov method)");
  }
  if (true_residual(prob, e, s, s_norm) <= opts.tol) return e;
  throw NumericalAssertion(
      "fixed-point iteration did not reach tolerance within the iteration "
      "cap");
}

ComplexField krylov_solve(const ResolventProblem& prob, const ComplexField& s,
                          const SolveOptions& opts, int& iterations) {
  // Conjugate gradients on the normal equations of M = z0 I - Gamma1 B Gamma1
  // with right side Gamma1 s; M is invertible off the restricted spectrum and
  // acts as z0 on the complement, so the full-space solve is well posed.
  const OperatorHandle m =
      subtract(OperatorHandle::scaled_identity(prob.shape(), prob.z0),
               prob.a());
  const ComplexField rhs = prob.gamma1.apply(s);
  const double rhs_norm = field_norm(rhs);
  ComplexField x(rhs.shape(), rhs.weight());
  if (rhs_norm == 0.0) {
    iterations = 0;
    return x;
  }
  ComplexField r = rhs;
  ComplexField z = m.apply_adjoint(r);
  ComplexField p = z;
  double zz = std::real(inner_product(z, z));
  for (int iter = 1; iter <= opts.max_iterations; ++iter) {
    ComplexField w = m.apply(p);
    const double ww = std::real(inner_product(w, w));
    if (ww <= 0.0) break;
    const double alpha = zz / ww;
    x = x.same_shape(x.values() + alpha * p.values());
    r = r.same_shape(r.values() - alpha * w.values());
    iterations = iter;
    if (field_norm(r) / rhs_norm <= opts.tol) return x;
    z = m.apply_adjoint(r);
    const double zz_next = std::real(inner_product(z, z));
    const double beta = zz_next / std::max(zz, kTiny);
    p = p.same_shape(z.values() + beta * p.values());
    zz = zz_next;
  }
  if (field_norm(r) / rhs_norm <= opts.tol) return x;
  throw NumericalAssertion(
      "krylov solve did not reach tolerance within the iteration cap");
}

}  // namespace

void attach_source(ResolventProblem& prob, ComplexField s, double tol) {
  if (s.shape() != prob.shape())
    throw ConfigError("source shape does not match the problem");
  const double norm = field_norm(s);
  if (norm == 0.0) throw ConfigError("source must be nonzero");
  const ComplexField g = prob.gamma1.apply(s);
  if ((g.values() - s.values()).norm() / norm > tol)
    throw ConfigError("source must lie in the range of the projector");
  prob.source = std::move(s);
}

const char* to_string(SolveMethod m) {
  switch (m) {
    case SolveMethod::kDense: return "dense";
    case SolveMethod::kNeumann: return "neumann";
    case SolveMethod::kKrylov: return "krylov";
  }
  return "?";
}

SolveReport solve_field(const ResolventProblem& prob, const ComplexField& s,
                        const SolveOptions& opts) {
  if (s.shape() != prob.shape())
    throw ConfigError("source shape does not match the problem");
  SolveReport rep;
  rep.method = opts.method;
  const double s_norm = field_norm(s);
  if (s_norm == 0.0) {
    rep.e = ComplexField(s.shape(), s.weight());
    rep.j = rep.e;
    return rep;
  }

  switch (opts.method) {
    case SolveMethod::kDense: {
      const OperatorHandle inv =
          subspace_inverse(prob.l(), prob.gamma1, opts.dense);
      rep.e = inv.apply(prob.gamma1.apply(s));
      rep.iterations = 0;
      break;
    }
    case SolveMethod::kNeumann:
      rep.e = neumann_solve(prob, s, opts, rep.iterations);
      break;
    case SolveMethod::kKrylov:
      rep.e = krylov_solve(prob, s, opts, rep.iterations);
      break;
  }

  const ComplexField le = rep.e.same_shape(
      prob.z0 * rep.e.values() - prob.b.apply(rep.e).values());
  rep.j = rep.e.same_shape(le.values() - s.values());
  rep.residual = field_norm(prob.gamma1.apply(rep.j)) / s_norm;
  rep.j_defect = rep.residual;
  const double e_norm = field_norm(rep.e);
  if (e_norm > 0.0) {
    const ComplexField ge = prob.gamma1.apply(rep.e);
    rep.e_defect = (rep.e.values() - ge.values()).norm() / e_norm;
  }
  return rep;
}

SolveReport solve_field(const ResolventProblem& prob,
                        const SolveOptions& opts) {
  if (!prob.source)
    throw ConfigError("no source attached to the problem");
  return solve_field(prob, *prob.source, opts);
}

ComplexField resolvent_apply(const ResolventProblem& prob,
                             const ComplexField& rhs,
                             ResolventVariant variant,
                             const SolveOptions& opts) {
  SolveReport rep = solve_field(prob, rhs, opts);
  if (variant == ResolventVariant::kR) return rep.e;
  if (prob.z0 == Complex(0.0, 0.0))
    throw ConfigError("variant conversion divides by z0 = 0");
  const ComplexField g = prob.gamma1.apply(rhs);
  return rhs.same_shape(rep.e.values() +
                        (rhs.values() - g.values()) / prob.z0);
}

double resolvent_chain_deviation(const ResolventProblem& prob, Index cap) {
  const Matrix g1 = materialize(prob.gamma1, cap);
  const Matrix bm = materialize(prob.b, cap);
  const Index n = g1.rows();
  const Matrix id = Matrix::Identity(n, n);
  const Matrix a = g1 * bm * g1;

  const Matrix x1 = (prob.z0 * id - g1 * bm).partialPivLu().solve(g1);
  const Matrix r0 = (prob.z0 * id - a).partialPivLu().solve(id);
  const Matrix x3 = r0 * g1;
  const Matrix x4 = r0 + (g1 - id) / prob.z0;
  const Matrix x2 = subspace_inverse_dense(prob.z0 * id - bm, g1);

  const std::array<const Matrix*, 4> forms{&x1, &x2, &x3, &x4};
  double scale = 0.0;
  for (const Matrix* f : forms) scale = std::max(scale, f->norm());
  double worst = 0.0;
  for (std::size_t i = 0; i < forms.size(); ++i)
    for (std::size_t k = i + 1; k < forms.size(); ++k)
      worst = std::max(worst, (*forms[i] - *forms[k]).norm());
  return worst / std::max(scale, kTiny);
}

double reference_independence_check(const ResolventProblem& prob,
                                    const std::vector<ReferencePair>& references,
                                    Index cap) {
  const Matrix g1 = materialize(prob.gamma1, cap);
  const Matrix lm = materialize(prob.l(), cap);
  const Index n = g1.rows();
  const Matrix id = Matrix::Identity(n, n);

  std::vector<Matrix> forms;
  forms.push_back(subspace_inverse_dense(lm, g1));
  for (const ReferencePair& ref : references) {
    const Matrix gm = materialize(ref.gamma, cap);
    const Matrix shift = materialize(ref.l0, cap) - lm;
    Eigen::FullPivLU<Matrix> lu(id - gm * shift);
    if (!lu.isInvertible())
      throw SingularOperatorError(
          "reference kernel leads to a singular fixed-point map");
    forms.push_back(lu.solve(gm));
  }

  double scale = 0.0;
  for (const Matrix& f : forms) scale = std::max(scale, f.norm());
  double worst = 0.0;
  for (std::size_t i = 0; i < forms.size(); ++i)
    for (std::size_t k = i + 1; k < forms.size(); ++k)
      worst = std::max(worst, (forms[i] - forms[k]).norm());
  return worst / std::max(scale, kTiny);
}

double duality_deviation(const ResolventProblem& prob, Index cap) {
  const Matrix g1 = materialize(prob.gamma1, cap);
  const Matrix lm = materialize(prob.l(), cap);
  const Index n = g1.rows();
  const Matrix id = Matrix::Identity(n, n);
  const Matrix g2 = id - g1;

  Eigen::FullPivLU<Matrix> lu(lm);
  if (!lu.isInvertible())
    throw SingularOperatorError(
        "coefficient operator is singular; shift it by a null translation "
        "to break the degeneracy");
  const Matrix li = lu.inverse();

  const Matrix inner = id / prob.z0 - g2 * (id / prob.z0 - li);
  Eigen::FullPivLU<Matrix> inner_lu(inner);
  if (!inner_lu.isInvertible())
    throw SingularOperatorError(
        "dual form degenerates: 1/z0 meets the complementary spectrum");
  const Matrix rhs = li - li * inner_lu.solve(g2 * li);
  const Matrix lhs = subspace_inverse_dense(lm, g1);
  return (lhs - rhs).norm() / std::max(lhs.norm(), kTiny);
}

ReflectionReport spectrum_reflection_check(
    const std::vector<std::uint8_t>& indicator,
    const FourierLocalOperator& proj, double endpoint_tol) {
  const PeriodicGrid& grid = proj.grid();
  const int m = proj.components();
  if (static_cast<Index>(indicator.size()) != grid.total_points())
    throw ConfigError("indicator length does not match the grid");

  std::vector<Matrix> blocks;
  blocks.reserve(indicator.size());
  Index ones = 0;
  for (std::uint8_t v : indicator) {
    blocks.push_back(v ? Matrix(Matrix::Identity(m, m))
                       : Matrix(Matrix::Zero(m, m)));
    if (v) ++ones;
  }
  const LocalOperator chi(grid, m, std::move(blocks));

  const OperatorHandle chih = chi.to_handle();
  const SpectrumResult s1 =
      brute_force_spectrum_restricted(chih, proj.to_handle());
  const SpectrumResult s2 =
      brute_force_spectrum_restricted(chih, proj.complement().to_handle());

  ReflectionReport rep;
  rep.total_dim = grid.total_points() * m;
  rep.rank_chi = ones * m;
  rep.rank_gamma1 = s1.eigenvalues.size();
  rep.constant_indicator =
      ones == 0 || ones == static_cast<Index>(indicator.size());

  auto classify = [&](const Eigen::VectorXcd& ev, std::vector<double>& all,
                      Index& zeros, Index& ones_out,
                      std::vector<double>& interior) {
    for (Index i = 0; i < ev.size(); ++i) {
      const double x = std::real(ev(i));
      all.push_back(x);
      if (x < endpoint_tol)
        ++zeros;
      else if (x > 1.0 - endpoint_tol)
        ++ones_out;
      else
        interior.push_back(x);
    }
    std::sort(all.begin(), all.end());
    std::sort(interior.begin(), interior.end());
  };

  std::vector<double> int1, int2;
  classify(s1.eigenvalues, rep.lambda1, rep.m1_zero, rep.m1_one, int1);
  classify(s2.eigenvalues, rep.lambda2, rep.m2_zero, rep.m2_one, int2);
  rep.interior_count = static_cast<Index>(int1.size());

  // Interior mirror: sorted lambda1 interiors against sorted 1 - lambda2.
  if (int1.size() != int2.size()) {
    rep.interior_max_gap = 1.0;
  } else {
    std::vector<double> mirrored;
    mirrored.reserve(int2.size());
    for (auto it = int2.rbegin(); it != int2.rend(); ++it)
      mirrored.push_back(1.0 - *it);
    for (std::size_t i = 0; i < int1.size(); ++i)
      rep.interior_max_gap =
          std::max(rep.interior_max_gap, std::abs(int1[i] - mirrored[i]));
  }

  // Endpoint-inclusive pairing: every lambda1 entry wants 1 - lambda in
  // lambda2.  Surplus endpoint multiplicities show up here as gaps of ~1.
  for (double x : rep.lambda1) {
    double best = 1.0;
    for (double y : rep.lambda2) best = std::min(best, std::abs(1.0 - x - y));
    rep.full_max_gap = std::max(rep.full_max_gap, best);
  }

  const Index p = rep.rank_gamma1;
  const Index q = rep.rank_chi;
  const Index n = rep.total_dim;
  rep.counting_law_ok = (rep.m1_zero == rep.m2_one + (p - q)) &&
                        (rep.m1_one == rep.m2_zero + (p + q - n));
  return rep;
}

}  // namespace rlab
