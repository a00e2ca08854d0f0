#pragma once

#include <optional>
#include <vector>

#include "rlab/cherkaev_gibiansky.hpp"

namespace rlab {

/// F(v) = H0(w0)/w0 with w0 the principal square root of v (Re w0 > 0).
/// Defined off the cut (-inf, 0]; real positive v gives Hermitian values
/// decreasing toward the limit slope H1.
Matrix sample_F(const ShiftedAugmentedFamily& fam, Complex v);

struct StieltjesOptions {
  double epsilon = 1e-3;       // offset of the inversion line Im v = epsilon
  int lambda_points = 4000;    // size of the lambda grid (0 plus geometric)
  std::optional<double> lambda_max;  // default 10 (|B| + |c|)^2
  bool richardson = true;      // linear extrapolation 2 D(eps) - D(2 eps)
};

/// Density reconstruction along the cut by the boundary-value formula
/// density(lambda) = -(1/pi) * antihermitian part of F(-lambda + i eps),
/// on a grid {0} followed by geometric spacing on [eps, lambda_max].
struct StieltjesMeasure {
  std::vector<double> lambda;
  std::vector<Matrix> density;     // Hermitian, ideally PSD
  Matrix h1;                       // limit slope reused at resynthesis
  double epsilon = 0.0;
  double min_density_eig = 0.0;    // most negative eigenvalue over the grid
  /// Distance between the Richardson answers built from (2eps, 4eps) and
  /// from (eps, 2eps): a self-diagnostic of the extrapolation.
  double schedule_delta = 0.0;
};

StieltjesMeasure invert_measure(const ShiftedAugmentedFamily& fam,
                                const StieltjesOptions& opts = {});

/// F~(v) = H1 + trapezoid integral of density/(v + lambda) over the grid.
Matrix resynthesize(const StieltjesMeasure& mu, Complex v);

/// Relative resynthesis error max over held-out real v samples.
double reconstruction_error(const ShiftedAugmentedFamily& fam,
                            const StieltjesMeasure& mu,
                            const std::vector<double>& held_out_v);

}  // namespace rlab
