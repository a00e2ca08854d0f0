#include "rlab/stieltjes.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "rlab/errors.hpp"

namespace rlab {
namespace {

Complex principal_sqrt(Complex v) {
  Complex w = std::sqrt(v);
  if (std::real(w) < 0.0) w = -w;
  return w;
}

// One density profile at a fixed epsilon: D(lambda) = -(1/pi) times the
// antihermitian part of F(-lambda + i eps), which is Hermitian by build.
std::vector<Matrix> density_profile(const ShiftedAugmentedFamily& fam,
                                    const std::vector<double>& lambda,
                                    double eps) {
  std::vector<Matrix> out;
  out.reserve(lambda.size());
  const Complex i(0.0, 1.0);
  for (double l : lambda) {
    const Matrix f = sample_F(fam, Complex(-l, eps));
    out.push_back((-(f - f.adjoint()) / (2.0 * i * std::numbers::pi)).eval());
  }
  return out;
}

}  // namespace

Matrix sample_F(const ShiftedAugmentedFamily& fam, Complex v) {
  if (std::imag(v) == 0.0 && std::real(v) <= 0.0)
    throw ConfigError(
        "sample_F: v lies on the branch cut (-inf, 0]; approach it with a "
        "small imaginary offset instead");
  const Complex w0 = principal_sqrt(v);
  return fam.h0(w0) / w0;
}

StieltjesMeasure invert_measure(const ShiftedAugmentedFamily& fam,
                                const StieltjesOptions& opts) {
  if (!(opts.epsilon > 0))
    throw ConfigError("invert_measure: epsilon must be positive");
  if (opts.lambda_points < 16)
    throw ConfigError("invert_measure: lambda grid too small");

  StieltjesMeasure mu;
  mu.epsilon = opts.epsilon;
  mu.h1 = fam.h1();

  const double lmax = opts.lambda_max
                          ? *opts.lambda_max
                          : 10.0 * std::pow(fam.b_norm + std::abs(fam.c), 2);
  const double lmin = opts.epsilon;
  const int geo = opts.lambda_points - 1;
  mu.lambda.reserve(opts.lambda_points);
  mu.lambda.push_back(0.0);
  for (int i = 0; i < geo; ++i)
    mu.lambda.push_back(lmin *
                        std::pow(lmax / lmin,
                                 static_cast<double>(i) /
                                     static_cast<double>(geo - 1)));

  const std::vector<Matrix> d1 = density_profile(fam, mu.lambda, opts.epsilon);
  if (!opts.richardson) {
    mu.density = d1;
  } else {
    const std::vector<Matrix> d2 =
        density_profile(fam, mu.lambda, 2.0 * opts.epsilon);
    const std::vector<Matrix> d4 =
        density_profile(fam, mu.lambda, 4.0 * opts.epsilon);
    mu.density.reserve(d1.size());
    double delta = 0.0;
    double scale = 0.0;
    for (std::size_t i = 0; i < d1.size(); ++i) {
      const Matrix fine = 2.0 * d1[i] - d2[i];
      const Matrix coarse = 2.0 * d2[i] - d4[i];
      delta = std::max(delta, (fine - coarse).cwiseAbs().maxCoeff());
      scale = std::max(scale, fine.cwiseAbs().maxCoeff());
      mu.density.push_back(fine);
    }
    mu.schedule_delta = delta / std::max(scale, 1e-300);
  }

  double mn = std::numeric_limits<double>::infinity();
  for (const Matrix& d : mu.density) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(
        ((d + d.adjoint()) / 2.0).eval(), Eigen::EigenvaluesOnly);
    mn = std::min(mn, es.eigenvalues()(0));
  }
  mu.min_density_eig = mn;
  return mu;
}

Matrix resynthesize(const StieltjesMeasure& mu, Complex v) {
  if (mu.lambda.size() < 2 || mu.density.size() != mu.lambda.size())
    throw ConfigError("resynthesize: malformed measure");
  Matrix acc = Matrix::Zero(mu.h1.rows(), mu.h1.cols());
  for (std::size_t i = 0; i + 1 < mu.lambda.size(); ++i) {
    const double dl = mu.lambda[i + 1] - mu.lambda[i];
    acc += (dl / 2.0) * (mu.density[i] / (v + mu.lambda[i]) +
                         mu.density[i + 1] / (v + mu.lambda[i + 1]));
  }
  return mu.h1 + acc;
}

double reconstruction_error(const ShiftedAugmentedFamily& fam,
                            const StieltjesMeasure& mu,
                            const std::vector<double>& held_out_v) {
  double worst = 0.0;
  for (double v : held_out_v) {
    const Matrix direct = sample_F(fam, Complex(v, 0.0));
    const Matrix approx = resynthesize(mu, Complex(v, 0.0));
    worst = std::max(worst,
                     (direct - approx).norm() / std::max(direct.norm(), 1e-300));
  }
  return worst;
}

}  // namespace rlab
