#pragma once

#include <cstdint>

namespace qbplan {

/// Numerical knobs for the grid solver. Defaults are sized for the
/// robotic-probe configuration (r=1, tau0=0.25, means in [-5,5]) but all of
/// them are ordinary tuning parameters.
struct SolverSettings {
  int mu_points = 2001;     // grid points on [0, mu_max]
  double mu_pad = 6.0;      // mu_max = max(|mu_lo|,|mu_hi|) + mu_pad/sqrt(tau0)
  int quad_order = 40;      // Gauss-Hermite order for the predictive integral
  int k_max = 200;          // hard cap on ladder length
  int max_sweeps = 50;      // hard cap on value-iteration sweeps
  double eps_eq = 1e-9;     // equality tolerance for region certification
  double tau_tol = 1e-9;    // relative tolerance for on-ladder matching
};

/// One sequential-observation task: observations X ~ N(theta, 1/r) at c
/// loss units each, prior credal set of Gaussians N(mu, 1/tau0) with
/// mu in [mu_lo, mu_hi].
///
/// lump > 1 means the decision epochs consume `lump` raw observations at a
/// time; the per-epoch observation has precision lump*r and costs lump*c.
struct ProblemConfig {
  double r = 1.0;
  double c = 0.01;
  double tau0 = 0.25;
  double mu_lo = -5.0;
  double mu_hi = 5.0;
  int lump = 1;
  SolverSettings solver{};

  double delta() const { return mu_hi - mu_lo; }
  double step_precision() const { return r * lump; }
  double step_cost() const { return c * lump; }

  /// Throws std::invalid_argument when a field is out of range.
  void validate() const;
};

} // namespace qbplan
