#include "rlab/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "rlab/bounds.hpp"
#include "rlab/cherkaev_gibiansky.hpp"
#include "rlab/contour.hpp"
#include "rlab/io.hpp"
#include "rlab/medium.hpp"
#include "rlab/null_t.hpp"
#include "rlab/resolvent.hpp"
#include "rlab/rng.hpp"
#include "rlab/stieltjes.hpp"
#include "rlab/zstar.hpp"

namespace rlab {
namespace {

using nlohmann::json;

// ---- small utilities --------------------------------------------------------

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Complex parse_complex(const json& j) {
  if (j.is_number()) return Complex(j.get<double>(), 0.0);
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return Complex(j[0].get<double>(), j[1].get<double>());
  throw ConfigError("complex values are a number or a [re, im] pair");
}

Matrix parse_matrix(const json& j) {
  if (!j.is_array() || j.empty())
    throw ConfigError("matrix values are nested arrays of rows");
  const Index rows = static_cast<Index>(j.size());
  const Index cols = static_cast<Index>(j[0].size());
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    if (static_cast<Index>(j[i].size()) != cols)
      throw ConfigError("matrix rows must have equal length");
    for (Index k = 0; k < cols; ++k) m(i, k) = parse_complex(j[i][k]);
  }
  return m;
}

std::string iso_utc_now() {
  const std::time_t t =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

double spectral_norm(const Matrix& m) {
  return Eigen::JacobiSVD<Matrix>(m).singularValues()(0);
}

// ---- context: grid / projector / medium ------------------------------------

struct ScenarioContext {
  std::filesystem::path base_dir;  // file references resolve against this
  std::uint64_t seed = 0;

  std::optional<PeriodicGrid> grid;
  std::optional<FourierLocalOperator> proj;  // grid-route projector
  std::optional<LocalOperator> b_local;      // grid-route multiplier B(x)
  std::optional<std::vector<std::uint8_t>> indicator;

  std::optional<Matrix> dense_gamma1;  // abstract-route projector
  std::optional<Matrix> dense_b;       // abstract-route multiplier

  std::optional<Complex> z0_default;

  bool grid_route() const { return proj.has_value(); }

  FieldShape shape() const {
    if (grid_route()) return proj->shape();
    return FieldShape{dense_b->rows(), 1};
  }

  OperatorHandle gamma1_handle() const {
    if (grid_route()) return proj->to_handle();
    return OperatorHandle::dense(*dense_gamma1);
  }

  OperatorHandle b_handle() const {
    if (grid_route()) return b_local->to_handle();
    return OperatorHandle::dense(*dense_b);
  }

  Matrix gamma1_dense() const {
    if (grid_route()) return materialize(proj->to_handle());
    return *dense_gamma1;
  }

  Matrix b_dense() const {
    if (grid_route()) return materialize(b_local->to_handle());
    return *dense_b;
  }

  Complex z0_for(const json& task) const {
    if (task.contains("z0")) return parse_complex(task.at("z0"));
    if (z0_default) return *z0_default;
    throw ConfigError("task needs a z0 (none set by the medium)");
  }

  ResolventProblem problem(Complex z0) const {
    return ResolventProblem{gamma1_handle(), b_handle(), z0, {}};
  }
};

std::filesystem::path resolve_path(const ScenarioContext& ctx,
                                   const std::string& p) {
  std::filesystem::path path(p);
  if (path.is_absolute()) return path;
  return ctx.base_dir / path;
}

std::vector<std::uint8_t> build_indicator(const ScenarioContext& ctx,
                                          const json& spec, Rng& rng) {
  if (!ctx.grid) throw ConfigError("indicator rasters need a grid");
  if (spec.is_string()) {
    const std::string name = spec.get<std::string>();
    if (name == "checkerboard") return checkerboard_indicator(*ctx.grid);
    if (name == "random") return random_indicator(*ctx.grid, rng.engine());
    if (name == "balanced-random")
      return balanced_random_indicator(*ctx.grid, rng.engine());
    throw ConfigError("unknown indicator '" + name +
                      "' (checkerboard, random, balanced-random, "
                      "{layered:...}, {file:...})");
  }
  if (spec.is_object() && spec.contains("layered"))
    return layered_indicator(*ctx.grid, spec.at("layered").value("axis", 0),
                             spec.at("layered").value("period", 2));
  if (spec.is_object() && spec.contains("file")) {
    auto [grid, ind] =
        read_indicator(resolve_path(ctx, spec.at("file").get<std::string>()));
    if (grid.dim != ctx.grid->dim || grid.n != ctx.grid->n)
      throw ConfigError("raster geometry does not match the scenario grid");
    return ind;
  }
  throw ConfigError("unrecognized indicator spec");
}

void build_medium(ScenarioContext& ctx, const json& cfg, Rng& rng) {
  if (!cfg.contains("medium")) throw ConfigError("scenario needs a medium");
  const json& m = cfg.at("medium");
  const std::string kind = m.value("kind", "two-phase");

  if (kind == "two-phase") {
    if (!ctx.grid) throw ConfigError("two-phase media need a grid");
    if (!ctx.proj) throw ConfigError("two-phase media need a projector");
    const int comps = ctx.proj->components();
    TwoPhaseMedium medium;
    medium.grid = *ctx.grid;
    medium.z0 = m.contains("z0") ? parse_complex(m.at("z0")) : Complex(2.0);
    auto phase_block = [&](const char* key, Complex fallback) {
      if (!m.contains(key)) return Matrix(fallback * Matrix::Identity(comps, comps));
      const json& p = m.at(key);
      if (p.is_array() && !p.empty() && p[0].is_array()) return parse_matrix(p);
      return Matrix(parse_complex(p) * Matrix::Identity(comps, comps));
    };
    medium.phase1 = phase_block("phase1", Complex(3.0));
    medium.phase2 = phase_block("phase2", Complex(1.0));
    medium.indicator =
        build_indicator(ctx, m.contains("indicator") ? m.at("indicator")
                                                     : json("checkerboard"),
                        rng);
    ctx.indicator = medium.indicator;
    ctx.b_local = two_phase_B(medium);
    ctx.z0_default = medium.z0;
    return;
  }

  if (kind == "random-dense") {
    const Index n = m.value("dim", 16);
    const double scl = m.value("scale", 1.0);
    const std::string style = m.value("style", "general");
    Matrix b;
    if (style == "hermitian") {
      b = rng.hermitian(n);
    } else if (style == "general") {
      b = rng.matrix(n, n);
    } else if (style == "skew-dominant") {
      Matrix g = rng.matrix(n, n);
      Matrix h = rng.matrix(n, n);
      b = (g - g.adjoint()) / 2.0 + 0.2 * (h + h.adjoint()) / 2.0;
    } else {
      throw ConfigError("medium style must be general, hermitian or "
                        "skew-dominant");
    }
    ctx.dense_b = (scl / spectral_norm(b)) * b;
    return;
  }

  if (kind == "file") {
    ctx.dense_b = read_matrix(resolve_path(ctx, m.at("path").get<std::string>()));
    return;
  }

  if (kind == "local-file") {
    if (!ctx.grid) throw ConfigError("local-file media need a grid");
    const int comps = m.at("components").get<int>();
    Matrix stacked =
        read_matrix(resolve_path(ctx, m.at("path").get<std::string>()));
    const Index points = ctx.grid->total_points();
    if (stacked.cols() != comps || stacked.rows() != points * comps)
      throw ConfigError("stacked block file does not match grid x components");
    std::vector<Matrix> blocks(points);
    for (Index p = 0; p < points; ++p)
      blocks[p] = stacked.middleRows(p * comps, comps);
    ctx.b_local = LocalOperator(*ctx.grid, comps, std::move(blocks));
    return;
  }

  throw ConfigError("unknown medium kind '" + kind +
                    "' (two-phase, random-dense, file, local-file)");
}

void build_projector(ScenarioContext& ctx, const json& cfg, Rng& rng) {
  if (!cfg.contains("projector"))
    throw ConfigError("scenario needs a projector");
  const json& p = cfg.at("projector");
  const std::string name = p.value("name", "conductivity");

  if (name == "conductivity" || name == "vector-gradient") {
    if (!ctx.grid)
      throw ConfigError("the " + name + " projector needs a grid");
    ZeroModePolicy policy = ZeroModePolicy::kAnnihilate;
    if (p.value("zero_mode", "annihilate") == std::string("identity"))
      policy = ZeroModePolicy::kIdentity;
    ctx.proj = name == "conductivity"
                   ? FourierLocalOperator::conductivity_projector(*ctx.grid,
                                                                  policy)
                   : FourierLocalOperator::vector_gradient_projector(*ctx.grid,
                                                                     policy);
    return;
  }

  if (name == "random-rank") {
    const Index n = p.contains("dim") ? p.at("dim").get<Index>()
                     : (ctx.dense_b ? ctx.dense_b->rows() : 16);
    const Index rank = p.at("rank").get<Index>();
    if (rank < 1 || rank > n)
      throw ConfigError("projector rank must lie in [1, dim]");
    Matrix q = rng.haar_unitary(n);
    ctx.dense_gamma1 = q.leftCols(rank) * q.leftCols(rank).adjoint();
    return;
  }

  if (name == "diag-mask") {
    const json& mask = p.at("mask");
    const Index n = static_cast<Index>(mask.size());
    Matrix g = Matrix::Zero(n, n);
    for (Index i = 0; i < n; ++i)
      g(i, i) = mask[i].get<int>() ? 1.0 : 0.0;
    ctx.dense_gamma1 = g;
    return;
  }

  if (name == "file") {
    Matrix g = read_matrix(resolve_path(ctx, p.at("path").get<std::string>()));
    if (hermitian_check(g, 1e-8).hermitian == false ||
        (g * g - g).cwiseAbs().maxCoeff() > 1e-8 * std::max(1.0, g.cwiseAbs().maxCoeff()))
      throw ConfigError("projector file is not a Hermitian idempotent");
    ctx.dense_gamma1 = std::move(g);
    return;
  }

  throw ConfigError("unknown projector '" + name +
                    "' (conductivity, vector-gradient, random-rank, "
                    "diag-mask, file)");
}

ScenarioContext build_context(const std::filesystem::path& scenario_file,
                              const json& cfg, std::uint64_t seed) {
  ScenarioContext ctx;
  ctx.base_dir = scenario_file.parent_path();
  ctx.seed = seed;
  Rng rng(splitmix64(seed));

  if (cfg.contains("grid")) {
    const json& g = cfg.at("grid");
    std::array<double, 3> lengths{1.0, 1.0, 1.0};
    if (g.contains("lengths"))
      for (std::size_t a = 0; a < g.at("lengths").size() && a < 3; ++a)
        lengths[a] = g.at("lengths")[a].get<double>();
    ctx.grid = PeriodicGrid(g.value("dim", 2), g.value("n", 16), lengths);
  }

  build_projector(ctx, cfg, rng);
  build_medium(ctx, cfg, rng);

  if (ctx.proj && ctx.b_local &&
      ctx.proj->components() != ctx.b_local->components())
    throw ConfigError("projector and medium component counts differ");
  if (ctx.dense_gamma1 && ctx.dense_b &&
      ctx.dense_gamma1->rows() != ctx.dense_b->rows())
    throw ConfigError("projector and medium dimensions differ");
  if (ctx.proj && ctx.dense_b)
    throw ConfigError("grid projector paired with a dense medium");
  if (ctx.dense_gamma1 && ctx.b_local)
    throw ConfigError("dense projector paired with a grid medium");
  if (!ctx.proj && !ctx.dense_gamma1)
    throw ConfigError("no projector was built");
  if (!ctx.b_local && !ctx.dense_b) throw ConfigError("no medium was built");
  return ctx;
}

// ---- sources ---------------------------------------------------------------

ComplexField make_source(const ScenarioContext& ctx, const json& task,
                         Rng& rng) {
  const FieldShape shape = ctx.shape();
  const double weight = ctx.grid_route() ? ctx.grid->weight() : 1.0;
  json spec = task.value("source", json("random"));
  ComplexField raw(shape, weight);
  if (spec.is_string() && spec == "random") {
    raw = ComplexField(shape, rng.vector(shape.dim()), weight);
  } else if (spec.is_string() && spec == "uniform") {
    Vector v = Vector::Zero(shape.dim());
    for (Index p = 0; p < shape.points; ++p) v[p * shape.components] = 1.0;
    raw = ComplexField(shape, std::move(v), weight);
  } else if (spec.is_object() && spec.contains("file")) {
    raw = read_field(resolve_path(ctx, spec.at("file").get<std::string>()),
                     weight);
    if (raw.shape() != shape)
      throw ConfigError("source field shape does not match the scenario");
  } else {
    throw ConfigError("source must be \"random\", \"uniform\" or {file:...}");
  }
  ComplexField s = ctx.gamma1_handle().apply(raw);
  const double norm = field_norm(s);
  if (!(norm > 1e-14))
    throw ConfigError("source projects to zero in the constrained subspace");
  s.values() /= norm;
  return s;
}

// ---- outcome bookkeeping ----------------------------------------------------

void check(TaskOutcome& out, bool ok, const std::string& text) {
  out.checks.push_back((ok ? "ok: " : "FAIL: ") + text);
  out.passed = out.passed && ok;
}

void check_le(TaskOutcome& out, const std::string& what, double value,
              double tol) {
  check(out, value <= tol, what + " " + fmt(value) + " <= " + fmt(tol));
}

std::ofstream open_artifact(const std::filesystem::path& dir,
                            TaskOutcome& out, const std::string& name) {
  out.artifacts.push_back(name);
  std::ofstream f(dir / name);
  if (!f) throw ConfigError("cannot write artifact " + name);
  return f;
}

void write_json_artifact(const std::filesystem::path& dir, TaskOutcome& out,
                         const std::string& name, const json& j) {
  auto f = open_artifact(dir, out, name);
  f << j.dump(2) << "\n";
}

// ---- task: solve ------------------------------------------------------------

SolveOptions solve_options_from(const ScenarioContext& ctx, const json& task,
                                Complex z0) {
  SolveOptions opts;
  const std::string method = task.value("method", "dense");
  if (method == "dense") opts.method = SolveMethod::kDense;
  else if (method == "neumann") opts.method = SolveMethod::kNeumann;
  else if (method == "krylov") opts.method = SolveMethod::kKrylov;
  else throw ConfigError("method must be dense, neumann or krylov");
  opts.tol = task.value("tol", 1e-10);
  opts.max_iterations = task.value("max_iterations", 10000);
  if (task.contains("reference")) {
    const Complex scale = parse_complex(task.at("reference").at("scale"));
    const FieldShape shape = ctx.shape();
    if (ctx.grid_route()) {
      const int m = ctx.proj->components();
      Matrix l0 = scale * Matrix::Identity(m, m);
      opts.gamma = build_gamma(*ctx.proj, l0).to_handle();
    } else {
      opts.gamma = rlab::scale(1.0 / scale, ctx.gamma1_handle());
    }
    opts.l0 = OperatorHandle::scaled_identity(shape, scale);
  }
  (void)z0;
  return opts;
}

TaskOutcome run_solve(const ScenarioContext& ctx, const json& task,
                      TaskOutcome out, const std::filesystem::path& dir,
                      Rng& rng) {
  const Complex z0 = ctx.z0_for(task);
  ResolventProblem prob = ctx.problem(z0);
  ComplexField s = make_source(ctx, task, rng);
  SolveOptions opts = solve_options_from(ctx, task, z0);

  SolveReport rep = solve_field(prob, s, opts);
  const double assert_residual = task.value("assert_residual", 1e-8);
  check_le(out, "solve residual", rep.residual, assert_residual);
  check_le(out, "constraint defect of e", rep.e_defect, assert_residual);
  check_le(out, "orthogonality defect of j", rep.j_defect, assert_residual);

  json summary;
  summary["z0"] = {z0.real(), z0.imag()};
  summary["method"] = to_string(rep.method);
  summary["iterations"] = rep.iterations;
  summary["residual"] = rep.residual;
  summary["e_defect"] = rep.e_defect;
  summary["j_defect"] = rep.j_defect;

  if (task.value("write_field", true)) {
    const std::string name = out.label + "_field.rlab";
    write_field(dir / name, rep.e);
    out.artifacts.push_back(name);
  }

  if (task.value("compare_dense", false)) {
    SolveOptions dense = opts;
    dense.method = SolveMethod::kDense;
    SolveReport oracle = solve_field(prob, s, dense);
    Vector diff = rep.e.values() - oracle.e.values();
    const double dev =
        field_norm(rep.e.same_shape(diff)) / field_norm(oracle.e);
    summary["backend_deviation"] = dev;
    check_le(out, "grid backend vs dense oracle", dev,
             task.value("assert_backend", 1e-10));
  }

  if (task.contains("null_shift")) {
    if (!ctx.grid_route())
      throw ConfigError("null_shift applies to grid scenarios only");
    const json& ns = task.at("null_shift");
    const std::string kind = ns.value("kind", "rotation");
    const double amp = ns.value("amplitude", 1.0);
    NullTOperator t = [&] {
      if (kind == "rotation") return rotation_null_t(*ctx.grid, amp);
      if (kind == "antisym") {
        std::array<int, 3> mode{1, 0, 0};
        if (ns.contains("mode"))
          for (int a = 0; a < 3; ++a) mode[a] = ns.at("mode")[a].get<int>();
        return antisym_null_t(*ctx.grid, mode, amp);
      }
      if (kind == "elasticity-trace")
        return elasticity_trace_null_t(*ctx.grid, amp);
      throw ConfigError("null_shift kind must be rotation, antisym or "
                        "elasticity-trace");
    }();
    const double defect = null_t_defect(t);
    summary["null_t_defect"] = defect;
    check_le(out, "projected translation norm", defect, 1e-10);

    const Complex coeff = ns.contains("coefficient")
                              ? parse_complex(ns.at("coefficient"))
                              : Complex(0.7, 0.3);
    // Shifting L by c T shifts the multiplier B = z0 I - L by -c T.
    LocalOperator shifted_b =
        subtract(*ctx.b_local, rlab::scale(coeff, t.multiplier));
    ResolventProblem shifted{prob.gamma1, shifted_b.to_handle(), z0, {}};
    SolveReport rep2 = solve_field(shifted, s, opts);
    Vector diff = rep2.e.values() - rep.e.values();
    const double dev = field_norm(rep.e.same_shape(diff)) / field_norm(rep.e);
    summary["shift_invariance"] = dev;
    check_le(out, "field invariance under the null shift", dev,
             task.value("assert_invariance", 1e-8));
  }

  write_json_artifact(dir, out, out.label + ".json", summary);
  return out;
}

// ---- task: resolvent-sweep --------------------------------------------------

TaskOutcome run_sweep(const ScenarioContext& ctx, const json& task,
                      TaskOutcome out, const std::filesystem::path& dir,
                      Rng& rng, int parallel) {
  const ComplexField s = make_source(ctx, task, rng);

  std::vector<Complex> z0s;
  if (task.contains("z0_list")) {
    for (const auto& j : task.at("z0_list")) z0s.push_back(parse_complex(j));
  } else if (task.contains("z0_grid")) {
    const json& g = task.at("z0_grid");
    const double from = g.at("re_from").get<double>();
    const double to = g.at("re_to").get<double>();
    const int points = g.value("points", 50);
    const double im = g.value("im", 0.0);
    if (points < 2) throw ConfigError("z0_grid needs at least 2 points");
    for (int i = 0; i < points; ++i)
      z0s.emplace_back(from + (to - from) * i / (points - 1), im);
  } else {
    throw ConfigError("resolvent-sweep needs z0_list or z0_grid");
  }

  // One sequential materialization and range factorization; each point is
  // then a small restricted solve, pure dense linear algebra safe to fan out
  // across threads.
  const Matrix g1 = ctx.gamma1_dense();
  const Matrix bm = ctx.b_dense();
  const Matrix q = projector_range_basis(g1);
  if (q.cols() == 0)
    throw SingularOperatorError("sweep: projector has empty range");
  const Matrix bres = q.adjoint() * bm * q;
  const Matrix idr = Matrix::Identity(q.cols(), q.cols());
  const Vector sv = s.values();
  const Vector sres = q.adjoint() * sv;
  const double s2 = std::real(sv.dot(sv)) * s.weight();

  struct Row {
    Complex z0, h, zstar;
    double residual = 0.0;
  };
  std::vector<Row> rows(z0s.size());
  std::vector<std::exception_ptr> errors(z0s.size());

  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      try {
        const Complex z0 = z0s[i];
        const Matrix lres = z0 * idr - bres;
        Eigen::BDCSVD<Matrix> svd(lres);
        const auto& singular = svd.singularValues();
        const double smin = singular[singular.size() - 1];
        if (!(smin > 0.0) || singular[0] / smin > 1e12)
          throw SingularOperatorError(
              "sweep: restricted operator singular at z0 = (" +
              fmt(z0.real()) + ", " + fmt(z0.imag()) + ")");
        Vector e = q * lres.partialPivLu().solve(sres);
        Vector resid = g1 * ((z0 * e - bm * e) - sv);
        rows[i].z0 = z0;
        rows[i].h = sv.dot(e) * s.weight() / s2;
        rows[i].zstar = 1.0 / rows[i].h;
        rows[i].residual = std::sqrt(std::real(resid.dot(resid)) * s.weight()) /
                           std::sqrt(s2);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };

  const int threads = std::max(1, std::min<int>(parallel,
                                                static_cast<int>(z0s.size())));
  if (threads == 1) {
    work(0, z0s.size());
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (z0s.size() + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
      const std::size_t b = t * chunk;
      const std::size_t e = std::min(z0s.size(), b + chunk);
      if (b < e) pool.emplace_back(work, b, e);
    }
    for (auto& th : pool) th.join();
  }
  for (const auto& err : errors)
    if (err) std::rethrow_exception(err);

  const double assert_residual = task.value("assert_residual", 1e-8);
  double worst = 0.0;
  for (const Row& r : rows) worst = std::max(worst, r.residual);
  check_le(out, "worst sweep residual", worst, assert_residual);

  auto csv = open_artifact(dir, out, out.label + ".csv");
  csv << "z0_re,z0_im,h_re,h_im,zstar_re,zstar_im,residual\n";
  for (const Row& r : rows)
    csv << fmt(r.z0.real()) << "," << fmt(r.z0.imag()) << ","
        << fmt(r.h.real()) << "," << fmt(r.h.imag()) << ","
        << fmt(r.zstar.real()) << "," << fmt(r.zstar.imag()) << ","
        << fmt(r.residual) << "\n";
  return out;
}

// ---- task: bounds -----------------------------------------------------------

TaskOutcome run_bounds(const ScenarioContext& ctx, const json& task,
                       TaskOutcome out, const std::filesystem::path& dir,
                       Rng& rng) {
  const OperatorHandle g1h = ctx.gamma1_handle();
  const OperatorHandle bh = ctx.b_handle();
  const OperatorHandle a = compose(g1h, compose(bh, g1h));
  json summary;

  // Krylov trial subspace from one projected seed.
  const int dim = task.value("subspace_dim", 6);
  std::vector<ComplexField> basis;
  ComplexField v = make_source(ctx, task, rng);
  for (int i = 0; i < dim; ++i) {
    basis.push_back(v);
    v = a.apply(v);
    const double n = field_norm(v);
    if (n > 0) v.values() /= n;
  }
  RayleighRitzResult rr = rayleigh_ritz(g1h, bh, basis);
  summary["rayleigh_ritz"] = {{"c_minus", rr.c_minus},
                              {"c_plus", rr.c_plus},
                              {"subspace_dim", rr.subspace_dim}};

  // Outer interval: pointwise translation bounds on the grid route, the
  // Hermitian compression bound on the abstract route.
  std::optional<SpectrumInterval> outer;
  std::string outer_label;
  if (ctx.grid_route() && task.value("translation", true)) {
    const int m = ctx.proj->components();
    Matrix t_minus = Matrix::Zero(m, m);
    Matrix t_plus = Matrix::Zero(m, m);
    if (task.contains("t_minus")) t_minus = parse_matrix(task.at("t_minus"));
    if (task.contains("t_plus")) t_plus = parse_matrix(task.at("t_plus"));
    const int sphere = task.value("sphere_samples", 0);
    QstarCheck cm = qstar_check(t_minus, *ctx.proj, sphere,
                                splitmix64(ctx.seed ^ 0x51));
    QstarCheck cp = qstar_check(t_plus, *ctx.proj, sphere,
                                splitmix64(ctx.seed ^ 0x52));
    TranslationCertificate cert =
        translation_bounds(*ctx.b_local, t_minus, cm, t_plus, cp);
    outer = cert.interval();
    outer_label = cert.label;
    summary["outer"] = {{"a_minus", cert.a_minus},
                       {"a_plus", cert.a_plus},
                       {"qstar_min", cert.k_sample_min},
                       {"label", cert.label}};
  } else if (!ctx.grid_route()) {
    const Matrix bm = ctx.b_dense();
    if (hermitian_check(bm, 1e-10).hermitian) {
      Eigen::SelfAdjointEigenSolver<Matrix> es(bm);
      outer = SpectrumInterval{es.eigenvalues().minCoeff(),
                               es.eigenvalues().maxCoeff(),
                               SpectrumInterval::Kind::kOuter};
      outer_label = "compression";
      summary["outer"] = {{"a_minus", outer->lo},
                         {"a_plus", outer->hi},
                         {"label", outer_label}};
    }
  }

  // Even-power refinement, one row per requested exponent.
  std::vector<int> ns;
  if (task.contains("power_n")) {
    if (task.at("power_n").is_array())
      for (const auto& j : task.at("power_n")) ns.push_back(j.get<int>());
    else
      ns.push_back(task.at("power_n").get<int>());
  } else {
    ns = {2, 4, 8, 16};
  }
  auto csv = open_artifact(dir, out, out.label + "_power.csv");
  csv << "n,c_minus,c_plus,valid_minus,valid_plus\n";
  json power = json::array();
  double prev_plus = -std::numeric_limits<double>::infinity();
  bool monotone = true;
  PowerRefineResult last;
  for (int n : ns) {
    last = power_refine(g1h, bh, rr, n, outer);
    csv << n << "," << fmt(last.interval.lo) << "," << fmt(last.interval.hi)
        << "," << (last.valid_minus ? 1 : 0) << ","
        << (last.valid_plus ? 1 : 0) << "\n";
    power.push_back({{"n", n},
                     {"c_minus", last.interval.lo},
                     {"c_plus", last.interval.hi},
                     {"valid_minus", last.valid_minus},
                     {"valid_plus", last.valid_plus}});
    monotone = monotone && (last.interval.hi >= prev_plus - 1e-12);
    prev_plus = last.interval.hi;
  }
  summary["power"] = power;
  if (ns.size() > 1) check(out, monotone, "power upper endpoint nondecreasing");

  // Restricted-spectrum oracle and the sandwich.
  const bool hermitian_b = ctx.grid_route()
                               ? hermitian_check(ctx.b_dense(), 1e-10).hermitian
                               : hermitian_check(*ctx.dense_b, 1e-10).hermitian;
  SpectrumResult oracle = brute_force_spectrum_restricted(bh, g1h);
  const double olo = oracle.eigenvalues.real().minCoeff();
  const double ohi = oracle.eigenvalues.real().maxCoeff();
  summary["oracle"] = {{"lo", olo}, {"hi", ohi}, {"hermitian", oracle.hermitian}};
  if (hermitian_b) {
    const double slack = 1e-9;
    check(out, rr.c_minus >= olo - slack && rr.c_plus <= ohi + slack,
          "trial interval inside the restricted spectrum hull");
    check(out,
          last.interval.lo >= olo - slack && last.interval.hi <= ohi + slack,
          "refined interval inside the restricted spectrum hull");
    if (outer)
      check(out, outer->lo <= olo + slack && outer->hi >= ohi - slack,
            "restricted spectrum hull inside the outer interval (" +
                outer_label + ")");
    if (task.contains("assert_top_within")) {
      const double rel = task.at("assert_top_within").get<double>();
      const double spread = ohi - olo;
      check_le(out, "refined top-edge gap (spread-relative)",
               (ohi - last.interval.hi) / (spread > 0 ? spread : 1.0), rel);
    }
  }

  if (task.contains("coupled")) {
    if (!ctx.grid_route())
      throw ConfigError("coupled certificates need the grid route");
    const json& c = task.at("coupled");
    const int m = ctx.proj->components();
    Matrix l0 = c.contains("l0") ? parse_matrix(c.at("l0"))
                                 : Matrix(Matrix::Identity(m, m));
    Matrix vcols;
    if (c.contains("v") && c.at("v").is_string() && c.at("v") == "identity")
      vcols = Matrix::Identity(m, m);
    else if (c.contains("v"))
      vcols = parse_matrix(c.at("v"));
    else
      vcols = rng.haar_unitary(m);
    CoupledCertificate cert = coupled_translation(*ctx.b_local, *ctx.proj, l0,
                                                  vcols);
    summary["coupled"] = {{"nu", cert.nu},
                          {"k_grid_min", cert.k_grid_min},
                          {"a_minus", cert.a_minus},
                          {"block_qstar_min", cert.block_qstar_min},
                          {"ell", cert.ell}};
    if (c.contains("expect_nu"))
      check_le(out, "coupling constant vs expectation",
               std::abs(cert.nu - c.at("expect_nu").get<double>()),
               c.value("tol", 1e-12));
    check(out, cert.block_qstar_min >= -1e-10,
          "block translation passes the projected positivity check (min " +
              fmt(cert.block_qstar_min) + ")");
  }

  if (task.value("contour_check", false)) {
    if (!outer)
      throw ConfigError("contour_check needs an outer interval "
                        "(grid translation or Hermitian abstract medium)");
    // The full operator also has the annihilated complement at 0.
    SpectrumInterval hull{std::min(outer->lo, 0.0), std::max(outer->hi, 0.0),
                          SpectrumInterval::Kind::kOuter};
    Contour contour = default_contour(hull);
    const Matrix am = materialize(a);
    Matrix exact;
    if (hermitian_check(am, 1e-10).hermitian) {
      Eigen::SelfAdjointEigenSolver<Matrix> es(am);
      exact = es.eigenvectors() *
              es.eigenvalues().array().exp().matrix().asDiagonal() *
              es.eigenvectors().adjoint();
    } else {
      Eigen::ComplexEigenSolver<Matrix> es(am);
      exact = es.eigenvectors() *
              es.eigenvalues().array().exp().matrix().asDiagonal() *
              es.eigenvectors().inverse();
    }
    std::vector<int> nodes{32, 64, 128};
    if (task.contains("contour_nodes")) {
      nodes.clear();
      for (const auto& j : task.at("contour_nodes")) nodes.push_back(j.get<int>());
    }
    auto ccsv = open_artifact(dir, out, out.label + "_contour.csv");
    ccsv << "nodes,rel_error\n";
    std::vector<double> errs;
    for (int n : nodes) {
      Matrix got = matrix_function_contour(
          a, [](Complex z) { return std::exp(z); }, contour, n);
      errs.push_back((got - exact).norm() / exact.norm());
      ccsv << n << "," << fmt(errs.back()) << "\n";
    }
    summary["contour"] = {{"center", {contour.center.real(), contour.center.imag()}},
                          {"radius", contour.radius}};
    for (std::size_t i = 0; i < nodes.size(); ++i)
      summary["contour"]["errors"].push_back({{"nodes", nodes[i]},
                                              {"rel_error", errs[i]}});
    const int target = task.value("contour_assert_nodes", 64);
    for (std::size_t i = 0; i < nodes.size(); ++i)
      if (nodes[i] == target)
        check_le(out, "contour exp error at " + std::to_string(target) +
                          " nodes",
                 errs[i], task.value("contour_assert_tol", 1e-8));
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
      if (errs[i + 1] < 1e-14) break;  // already at round-off
      check(out, errs[i] / errs[i + 1] >= 10.0,
            "node doubling " + std::to_string(nodes[i]) + "->" +
                std::to_string(nodes[i + 1]) + " cuts the error 10x (" +
                fmt(errs[i] / errs[i + 1]) + ")");
    }
  }

  write_json_artifact(dir, out, out.label + ".json", summary);
  return out;
}

// ---- task: augment-verify ---------------------------------------------------

SplitChoice parse_split(const json& task) {
  const std::string split = task.value("split", "z0-shifted");
  if (split == "hermitian") return SplitChoice::kHermitian;
  if (split == "z0-shifted") return SplitChoice::kZ0Shifted;
  throw ConfigError("split must be hermitian or z0-shifted");
}

TaskOutcome run_augment(const ScenarioContext& ctx, const json& task,
                        TaskOutcome out, const std::filesystem::path& dir,
                        Rng& rng) {
  const Complex z0 = ctx.z0_for(task);
  const Matrix g1 = ctx.gamma1_dense();
  const Matrix bm = ctx.b_dense();
  json summary;

  const SplitChoice split = parse_split(task);
  AugmentedProblem aug = augment_split(g1, bm, z0, split);
  summary["herm_defect"] = aug.herm_defect;
  // The z0-shifted split only promises a Hermitian block operator on the
  // real axis; the hermitian split promises it everywhere.
  if (split == SplitChoice::kHermitian || z0.imag() == 0.0)
    check_le(out, "block operator Hermiticity defect", aug.herm_defect, 1e-10);

  const double dev = remarkable_identity_deviation(aug, bm, z0);
  summary["identity_deviation"] = dev;
  check_le(out, "doubled-problem collapse identity", dev,
           task.value("assert_identity", 1e-8));

  const Matrix h0 = h0_matrix(aug);
  double via = 0.0;
  for (Complex z : {Complex(0.7, 0.4), Complex(-2.1, 1.3)})
    via = std::max(via, (h0_via_resolvent(aug, z) - h0).norm() /
                            std::max(1.0, h0.norm()));
  summary["resolvent_route_deviation"] = via;
  check_le(out, "doubled resolvent route independence of z", via, 1e-10);

  if (task.value("family", false)) {
    ShiftedAugmentedFamily fam = ShiftedAugmentedFamily::from_b(g1, bm);
    summary["family"] = {{"c", fam.c},
                         {"coercivity_margin", fam.coercivity_margin},
                         {"b_norm", fam.b_norm}};
    double worst_defect = 0.0;
    double worst_min = std::numeric_limits<double>::infinity();
    for (double w0 : {1.0, 5.0, 10.0, 50.0, 200.0}) {
      H0Evaluation ev = evaluate_H0(fam, w0);
      worst_defect = std::max(worst_defect, ev.hermitian_defect);
      worst_min = std::min(worst_min, ev.hermitian_min);
    }
    summary["family"]["real_axis_herm_defect"] = worst_defect;
    summary["family"]["restricted_min_eig"] = worst_min;
    check_le(out, "H0 Hermiticity on the real axis", worst_defect, 1e-10);
    check(out, worst_min > 0,
          "H0 positive on the doubled subspace (min " + fmt(worst_min) + ")");

    const int samples = task.value("samples", 20);
    double half_min = std::numeric_limits<double>::infinity();
    for (int i = 0; i < samples; ++i) {
      const Complex w0(std::exp(rng.uniform(-1.0, 3.0)),
                       rng.uniform(-40.0, 40.0));
      half_min = std::min(half_min, evaluate_H0(fam, w0).hermitian_min);
    }
    summary["family"]["half_plane_min_eig"] = half_min;
    check(out, half_min > 0,
          "H0 keeps a positive Hermitian part for Re w0 > 0 (min " +
              fmt(half_min) + ")");

    auto csv = open_artifact(dir, out, out.label + "_asymptotics.csv");
    csv << "w0,decay_norm\n";
    const Matrix h1 = fam.h1();
    std::vector<double> decay;
    for (double w0 : {1e2, 1e3, 1e4}) {
      decay.push_back((fam.h0(w0) / w0 - h1).norm());
      csv << fmt(w0) << "," << fmt(decay.back()) << "\n";
    }
    bool ratios = true;
    for (std::size_t i = 0; i + 1 < decay.size(); ++i) {
      const double ratio = decay[i] / decay[i + 1];
      ratios = ratios && std::abs(ratio / 10.0 - 1.0) <= 0.2;
      summary["family"]["decay_ratio"].push_back(ratio);
    }
    check(out, ratios, "large-w0 decay follows 1/w0 within 20%");
  }

  write_json_artifact(dir, out, out.label + ".json", summary);
  return out;
}

// ---- task: stieltjes --------------------------------------------------------

TaskOutcome run_stieltjes(const ScenarioContext& ctx, const json& task,
                          TaskOutcome out, const std::filesystem::path& dir) {
  const Matrix g1 = ctx.gamma1_dense();
  const Matrix bm = ctx.b_dense();
  ShiftedAugmentedFamily fam = ShiftedAugmentedFamily::from_b(g1, bm);

  StieltjesOptions opts;
  opts.epsilon = task.value("epsilon", 1e-3);
  opts.lambda_points = task.value("lambda_points", 4000);
  if (task.contains("lambda_max"))
    opts.lambda_max = task.at("lambda_max").get<double>();
  opts.richardson = task.value("richardson", true);

  std::vector<double> held;
  if (task.contains("held_out") && task.at("held_out").is_array()) {
    for (const auto& j : task.at("held_out")) held.push_back(j.get<double>());
  } else {
    const json h = task.value("held_out", json::object());
    const double lo = h.value("from", 0.1);
    const double hi = h.value("to", 100.0);
    const int pts = h.value("points", 20);
    for (int i = 0; i < pts; ++i)
      held.push_back(lo * std::pow(hi / lo, pts == 1 ? 0.0
                                                     : double(i) / (pts - 1)));
  }

  StieltjesMeasure mu = invert_measure(fam, opts);
  json summary;
  summary["epsilon"] = mu.epsilon;
  summary["lambda_points"] = static_cast<int>(mu.lambda.size());
  summary["min_density_eig"] = mu.min_density_eig;
  summary["schedule_delta"] = mu.schedule_delta;
  check(out, mu.min_density_eig >= -task.value("assert_psd", 1e-8),
        "reconstructed density stays PSD (min eig " +
            fmt(mu.min_density_eig) + ")");

  const double err = reconstruction_error(fam, mu, held);
  summary["held_out_error"] = err;
  check_le(out, "held-out resynthesis error", err,
           task.value("assert_rel", 0.05));

  if (task.value("epsilon_halving", false)) {
    StieltjesOptions half = opts;
    half.epsilon = opts.epsilon / 2.0;
    StieltjesMeasure mu2 = invert_measure(fam, half);
    const double err2 = reconstruction_error(fam, mu2, held);
    summary["held_out_error_half_eps"] = err2;
    check(out, err2 < err,
          "halving epsilon tightens the held-out error (" + fmt(err2) +
              " < " + fmt(err) + ")");
  }

  auto csv = open_artifact(dir, out, out.label + "_measure.csv");
  csv << "lambda,density_trace,density_min_eig\n";
  for (std::size_t i = 0; i < mu.lambda.size(); ++i) {
    const Matrix& d = mu.density[i];
    Eigen::SelfAdjointEigenSolver<Matrix> es((d + d.adjoint()) / 2.0);
    csv << fmt(mu.lambda[i]) << "," << fmt(d.real().trace()) << ","
        << fmt(es.eigenvalues().minCoeff()) << "\n";
  }
  write_json_artifact(dir, out, out.label + ".json", summary);
  return out;
}

// ---- task: zstar ------------------------------------------------------------

TaskOutcome run_zstar(const ScenarioContext& ctx, const json& task,
                      TaskOutcome out, const std::filesystem::path& dir,
                      Rng& rng) {
  const Matrix g1 = ctx.gamma1_dense();
  const Matrix bm = ctx.b_dense();
  Vector s = g1 * rng.vector(g1.rows());
  s /= s.norm();
  json summary;

  const int sign_samples = task.value("sign_samples", 0);
  if (sign_samples > 0) {
    int agree = 0;
    for (int i = 0; i < sign_samples; ++i) {
      double im = rng.uniform(0.05, 2.0) * (rng.uniform() < 0.5 ? -1.0 : 1.0);
      const Complex z0(rng.uniform(-3.0, 3.0), im);
      const Complex zs = zstar_value(g1, bm, s, z0);
      if ((zs.imag() > 0) == (z0.imag() > 0)) ++agree;
    }
    summary["sign_agreements"] = agree;
    summary["sign_samples"] = sign_samples;
    check(out, agree == sign_samples,
          "Im z* follows Im z0 on " + std::to_string(agree) + "/" +
              std::to_string(sign_samples) + " samples");
  }

  if (task.contains("lo") && task.contains("hi")) {
    const double lo = task.at("lo").get<double>();
    const double hi = task.at("hi").get<double>();
    ZstarScan scan = zstar_scan(g1, bm, s, lo, hi,
                                task.value("grid_points", 10000));
    summary["zeros"] = scan.zeros;
    summary["poles"] = scan.poles;
    check(out, scan.interlaced, "zeros and poles interlace across the window");

    if (hermitian_check(bm, 1e-10).hermitian) {
      SpectrumResult oracle = brute_force_spectrum_restricted(
          OperatorHandle::dense(bm), OperatorHandle::dense(g1));
      double worst = 0.0;
      for (double z : scan.zeros) {
        double best = std::numeric_limits<double>::infinity();
        for (Index i = 0; i < oracle.eigenvalues.size(); ++i)
          best = std::min(best,
                          std::abs(z - oracle.eigenvalues[i].real()));
        worst = std::max(worst, best);
      }
      summary["worst_zero_gap"] = worst;
      check_le(out, "scan zeros vs restricted spectrum", worst,
               task.value("assert_zero_match", 1e-6));
    }

    auto csv = open_artifact(dir, out, out.label + "_scan.csv");
    csv << "kind,location\n";
    for (double z : scan.zeros) csv << "zero," << fmt(z) << "\n";
    for (double p : scan.poles) csv << "pole," << fmt(p) << "\n";
  }

  if (task.contains("dual_z0")) {
    ZstarDualCheck dual =
        zstar_dual_check(g1, bm, s, parse_complex(task.at("dual_z0")));
    summary["dual_deviation"] = dual.deviation;
    summary["dual_note"] = dual.audit_note;
    check_le(out, "complementary-subspace route to z*", dual.deviation,
             task.value("assert_dual", 1e-8));
  }

  write_json_artifact(dir, out, out.label + ".json", summary);
  return out;
}

// ---- task: identities -------------------------------------------------------

TaskOutcome run_identities(const ScenarioContext& ctx, const json& task,
                           TaskOutcome out, const std::filesystem::path& dir,
                           Rng& rng) {
  json summary;
  std::vector<std::string> checks{"chain", "duality"};
  if (task.contains("checks")) {
    checks.clear();
    for (const auto& j : task.at("checks")) checks.push_back(j.get<std::string>());
  }
  auto wants = [&](const char* name) {
    return std::find(checks.begin(), checks.end(), name) != checks.end();
  };

  if (wants("chain") || wants("duality") || wants("reference") ||
      wants("remarkable")) {
    const Complex z0 = ctx.z0_for(task);
    ResolventProblem prob = ctx.problem(z0);

    if (wants("chain")) {
      const double dev = resolvent_chain_deviation(prob);
      summary["chain_deviation"] = dev;
      check_le(out, "four-expression resolvent chain", dev,
               task.value("assert_chain", 1e-10));
    }
    if (wants("duality")) {
      const double dev = duality_deviation(prob);
      summary["duality_deviation"] = dev;
      check_le(out, "complementary-subspace duality", dev,
               task.value("assert_duality", 1e-8));
    }
    if (wants("reference")) {
      std::vector<ReferencePair> refs;
      std::vector<double> scales{0.5, 1.7, 3.3};
      if (task.contains("reference_scales")) {
        scales.clear();
        for (const auto& j : task.at("reference_scales"))
          scales.push_back(j.get<double>());
      }
      const FieldShape shape = ctx.shape();
      for (double sc : scales) {
        ReferencePair ref;
        ref.l0 = OperatorHandle::scaled_identity(shape, sc);
        if (ctx.grid_route()) {
          const int m = ctx.proj->components();
          ref.gamma =
              build_gamma(*ctx.proj, Matrix(sc * Matrix::Identity(m, m)))
                  .to_handle();
        } else {
          ref.gamma = scale(1.0 / sc, ctx.gamma1_handle());
        }
        refs.push_back(std::move(ref));
      }
      if (ctx.grid_route() && task.contains("reference_blocks")) {
        for (const auto& j : task.at("reference_blocks")) {
          Matrix l0 = parse_matrix(j);
          ReferencePair ref;
          ref.gamma = build_gamma(*ctx.proj, l0).to_handle();
          Matrix full = Matrix::Zero(shape.dim(), shape.dim());
          const Index m = l0.rows();
          for (Index p = 0; p < shape.points; ++p)
            full.block(p * m, p * m, m, m) = l0;
          ref.l0 = OperatorHandle::dense(std::move(full), shape);
          refs.push_back(std::move(ref));
        }
      }
      const double dev = reference_independence_check(prob, refs);
      summary["reference_deviation"] = dev;
      summary["reference_count"] = static_cast<int>(refs.size());
      check_le(out, "independence of the reference medium (" +
                        std::to_string(refs.size()) + " kernels)",
               dev, task.value("assert_reference", 1e-8));
    }
    if (wants("remarkable")) {
      const double dev = remarkable_identity_deviation(
          ctx.gamma1_dense(), ctx.b_dense(), z0, parse_split(task));
      summary["remarkable_deviation"] = dev;
      check_le(out, "doubled-problem collapse identity", dev,
               task.value("assert_remarkable", 1e-8));
    }
  }

  if (wants("projector")) {
    if (ctx.grid_route()) {
      const double herm = ctx.proj->max_block_hermitian_defect();
      const double idem = ctx.proj->max_block_idempotency_defect();
      summary["projector_herm_defect"] = herm;
      summary["projector_idem_defect"] = idem;
      check_le(out, "projector blocks Hermitian", herm, 1e-12);
      check_le(out, "projector blocks idempotent", idem, 1e-12);
      const int m = ctx.proj->components();
      FourierLocalOperator gamma =
          build_gamma(*ctx.proj, Matrix::Identity(m, m));
      const double norm = gamma_normalization_defect(gamma,
                                                     Matrix::Identity(m, m));
      summary["gamma_normalization_defect"] = norm;
      check_le(out, "reference kernel normalization", norm, 1e-12);
    } else {
      const Matrix g = ctx.gamma1_dense();
      const double idem = (g * g - g).cwiseAbs().maxCoeff();
      summary["projector_idem_defect"] = idem;
      check_le(out, "projector idempotent", idem, 1e-10);
    }
  }

  if (wants("reflection")) {
    if (!ctx.grid_route() || !ctx.indicator)
      throw ConfigError("the reflection check needs a two-phase grid medium");
    const int extra = task.value("indicators", 0);
    std::vector<std::vector<std::uint8_t>> fields{*ctx.indicator};
    for (int i = 0; i < extra; ++i)
      fields.push_back(balanced_random_indicator(*ctx.grid, rng.engine()));
    double worst_gap = 0.0;
    bool counting = true;
    auto csv = open_artifact(dir, out, out.label + "_reflection.csv");
    csv << "indicator,interior_max_gap,counting_law\n";
    for (std::size_t i = 0; i < fields.size(); ++i) {
      ReflectionReport rep = spectrum_reflection_check(fields[i], *ctx.proj);
      worst_gap = std::max(worst_gap, rep.interior_max_gap);
      counting = counting && rep.counting_law_ok;
      csv << i << "," << fmt(rep.interior_max_gap) << ","
          << (rep.counting_law_ok ? 1 : 0) << "\n";
    }
    summary["reflection_worst_gap"] = worst_gap;
    summary["reflection_fields"] = static_cast<int>(fields.size());
    check_le(out, "interior spectra mirror to 1 - lambda", worst_gap,
             task.value("assert_reflection", 1e-8));
    check(out, counting, "endpoint multiplicities obey the counting law");
  }

  write_json_artifact(dir, out, out.label + ".json", summary);
  return out;
}

// ---- dispatch ---------------------------------------------------------------

const std::map<std::string, std::string>& task_schemas() {
  static const std::map<std::string, std::string> schemas = {
      {"solve",
       "solve: one constrained solve (z0 I - Gamma1 B Gamma1)^{-1} Gamma1 s.\n"
       "  z0: [re, im] (default: the medium's z0)\n"
       "  method: dense | neumann | krylov (default dense)\n"
       "  tol: solver tolerance (default 1e-10)\n"
       "  max_iterations: iteration cap (default 10000)\n"
       "  reference: {scale: c} fixed-point reference L0 = c I (neumann)\n"
       "  source: \"random\" | \"uniform\" | {file: path}  (projected and\n"
       "          normalized; \"uniform\" needs a zero_mode: identity projector)\n"
       "  write_field: bool (default true) -> <label>_field.rlab\n"
       "  compare_dense: bool -> deviation vs the dense oracle route\n"
       "  assert_backend: tolerance for that deviation (default 1e-10)\n"
       "  null_shift: {kind: rotation|antisym|elasticity-trace, coefficient,\n"
       "               amplitude, mode} -> solves again with L + c T and\n"
       "               checks field invariance (assert_invariance, 1e-8)\n"
       "  assert_residual: accept threshold (default 1e-8)"},
      {"resolvent-sweep",
       "resolvent-sweep: scalar response h(z0) = (s, R s)/|s|^2 on a z0 set.\n"
       "  z0_list: [[re, im], ...]  or  z0_grid: {re_from, re_to, points, im}\n"
       "  source: as in solve\n"
       "  assert_residual: worst-point threshold (default 1e-8)\n"
       "  Emits <label>.csv: z0, h, z* = 1/h, residual per point.\n"
       "  Independent points fan out across --parallel-sweeps threads."},
      {"bounds",
       "bounds: inner Rayleigh-Ritz/power interval vs outer certificates.\n"
       "  subspace_dim: Krylov trial dimension (default 6)\n"
       "  power_n: even exponent or list (default [2, 4, 8, 16])\n"
       "  translation: bool, grid route (default true); t_minus / t_plus:\n"
       "               translation blocks (default 0); sphere_samples: int\n"
       "  assert_top_within: spread-relative gap for the refined top edge\n"
       "  coupled: {l0, v | \"identity\", expect_nu, tol} coupling certificate\n"
       "  contour_check: bool -> exp(A) by contour quadrature vs the\n"
       "      eigendecomposition oracle; contour_nodes (default [32,64,128]),\n"
       "      contour_assert_nodes (64), contour_assert_tol (1e-8)\n"
       "  Emits <label>_power.csv and <label>.json."},
      {"augment-verify",
       "augment-verify: doubled Hermitian reformulation checks.\n"
       "  z0: [re, im]; split: hermitian | z0-shifted (default z0-shifted)\n"
       "  assert_identity: collapse-identity tolerance (default 1e-8)\n"
       "  family: bool -> w0-family checks (Hermiticity on the real axis,\n"
       "          positivity for Re w0 > 0, 1/w0 decay; samples: default 20)\n"
       "  Emits <label>.json and <label>_asymptotics.csv."},
      {"stieltjes",
       "stieltjes: measure reconstruction of F(v) = H0(sqrt v)/sqrt v.\n"
       "  epsilon: inversion-line offset (default 1e-3); the density is read\n"
       "      off just above the cut and Richardson-extrapolated from the\n"
       "      (epsilon, 2 epsilon) pair by default (richardson: false to\n"
       "      disable)\n"
       "  lambda_points: grid size, {0} + geometric (default 4000)\n"
       "  lambda_max: support cap (default 10 (|B| + |c|)^2)\n"
       "  held_out: [v, ...] or {from: 0.1, to: 100, points: 20}\n"
       "  assert_psd: density PSD slack (default 1e-8)\n"
       "  assert_rel: resynthesis error bound (default 0.05)\n"
       "  epsilon_halving: bool -> rerun at epsilon/2, expect improvement\n"
       "  Emits <label>_measure.csv and <label>.json."},
      {"zstar",
       "zstar: scalar spectral response z*(z0) = |s|^2 / (s, R s).\n"
       "  sign_samples: random non-real z0 sign checks (Im z* vs Im z0)\n"
       "  lo, hi, grid_points: real-axis scan window (Hermitian media)\n"
       "  assert_zero_match: scan zeros vs restricted spectrum (default 1e-6)\n"
       "  dual_z0: [re, im] -> complementary-subspace route comparison\n"
       "  Emits <label>_scan.csv and <label>.json."},
      {"identities",
       "identities: exact operator identities on the configured problem.\n"
       "  checks: subset of [chain, duality, reference, remarkable,\n"
       "          projector, reflection] (default [chain, duality])\n"
       "  z0: [re, im] where needed\n"
       "  reference_scales: scalar L0 list (default [0.5, 1.7, 3.3]);\n"
       "  reference_blocks: extra positive-definite L0 blocks (grid route)\n"
       "  split: for the remarkable check (default z0-shifted)\n"
       "  indicators: extra random balanced rasters for reflection\n"
       "  assert_chain (1e-10), assert_duality (1e-8), assert_reference\n"
       "  (1e-8), assert_remarkable (1e-8), assert_reflection (1e-8)\n"
       "  Emits <label>.json (+ <label>_reflection.csv)."},
  };
  return schemas;
}

}  // namespace

std::string ScenarioReport::first_failure() const {
  for (const auto& t : tasks)
    for (const auto& c : t.checks)
      if (c.rfind("FAIL:", 0) == 0) return t.label + ": " + c.substr(6);
  return {};
}

std::vector<std::string> known_tasks() {
  std::vector<std::string> names;
  for (const auto& [k, v] : task_schemas()) names.push_back(k);
  return names;
}

std::string describe_task(const std::string& task) {
  const auto& schemas = task_schemas();
  auto it = schemas.find(task);
  if (it == schemas.end()) {
    std::string hint = "unknown task '" + task + "'; available:";
    for (const auto& [k, v] : schemas) hint += " " + k;
    throw ConfigError(hint);
  }
  return it->second;
}

std::vector<std::string> bundled_scenarios(const std::filesystem::path& dir) {
  std::vector<std::string> names;
  if (!std::filesystem::is_directory(dir)) return names;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.path().extension() == ".json")
      names.push_back(entry.path().filename().string());
  std::sort(names.begin(), names.end());
  return names;
}

ScenarioReport run_scenario(const std::filesystem::path& scenario_file,
                            const RunOptions& opts) {
  std::ifstream in(scenario_file);
  if (!in)
    throw ConfigError("cannot open scenario " + scenario_file.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string bytes = buffer.str();

  json cfg;
  try {
    cfg = json::parse(bytes);
  } catch (const json::exception& e) {
    throw ConfigError("scenario is not valid JSON: " + std::string(e.what()));
  }

  ScenarioReport report;
  json manifest;
  try {
    if (cfg.value("schema", 0) != 1)
      throw ConfigError("scenario schema must be 1");
    report.name = cfg.value("name", scenario_file.stem().string());
    if (!cfg.contains("tasks") || !cfg.at("tasks").is_array() ||
        cfg.at("tasks").empty())
      throw ConfigError("scenario has no tasks");

    const std::uint64_t seed =
        opts.seed_override.value_or(cfg.value("seed", std::uint64_t{1}));
    report.out_dir = opts.out_dir.value_or(std::filesystem::path(
        cfg.value("output", std::string("out/") + report.name)));
    std::filesystem::create_directories(report.out_dir);

    ScenarioContext ctx = build_context(scenario_file, cfg, seed);

    manifest["schema"] = 1;
    manifest["scenario"] = report.name;
    manifest["scenario_file"] = scenario_file.filename().string();
    manifest["input_fnv1a"] = hex64(fnv1a64(bytes));
    manifest["seed"] = seed;
    manifest["versions"] = {
        {"resolvent-lab", kToolVersion},
        {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." +
                      std::to_string(EIGEN_MAJOR_VERSION) + "." +
                      std::to_string(EIGEN_MINOR_VERSION)}};

    const json& tasks = cfg.at("tasks");
    for (std::size_t i = 0; i < tasks.size(); ++i) {
      const json& t = tasks[i];
      const std::string kind = t.at("task").get<std::string>();
      if (task_schemas().find(kind) == task_schemas().end())
        throw ConfigError(
            "unknown task '" + kind + "' at index " + std::to_string(i));
      TaskOutcome out;
      out.task = kind;
      out.label = t.value("label", kind + "_" + std::to_string(i));
      Rng rng(splitmix64(ctx.seed ^ (0x100 + i)));
      const auto start = std::chrono::steady_clock::now();
      if (kind == "solve")
        out = run_solve(ctx, t, std::move(out), report.out_dir, rng);
      else if (kind == "resolvent-sweep")
        out = run_sweep(ctx, t, std::move(out), report.out_dir, rng,
                        opts.parallel_sweeps);
      else if (kind == "bounds")
        out = run_bounds(ctx, t, std::move(out), report.out_dir, rng);
      else if (kind == "augment-verify")
        out = run_augment(ctx, t, std::move(out), report.out_dir, rng);
      else if (kind == "stieltjes")
        out = run_stieltjes(ctx, t, std::move(out), report.out_dir);
      else if (kind == "zstar")
        out = run_zstar(ctx, t, std::move(out), report.out_dir, rng);
      else if (kind == "identities")
        out = run_identities(ctx, t, std::move(out), report.out_dir, rng);
      out.seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                        start)
              .count();
      report.tasks.push_back(std::move(out));
    }
  } catch (const json::exception& e) {
    throw ConfigError("scenario config: " + std::string(e.what()));
  }

  json tasks_json = json::array();
  json timings;
  for (const auto& t : report.tasks) {
    tasks_json.push_back({{"label", t.label},
                          {"task", t.task},
                          {"passed", t.passed},
                          {"checks", t.checks},
                          {"artifacts", t.artifacts}});
    timings[t.label] = t.seconds;
  }
  manifest["tasks"] = std::move(tasks_json);
  manifest["timings"] = std::move(timings);        // excluded from byte compare
  manifest["generated_at"] = iso_utc_now();        // excluded from byte compare
  std::ofstream mf(report.out_dir / "manifest.json");
  if (!mf) throw ConfigError("cannot write manifest.json");
  mf << manifest.dump(2) << "\n";
  return report;
}

}  // namespace rlab
