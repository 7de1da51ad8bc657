#pragma once

#include <Eigen/Core>
#include <vector>

#include "qbplan/config.hpp"
#include "qbplan/plan.hpp"
#include "qbplan/regions.hpp"

namespace qbplan {

/// Nodes/weights for E[f(Y)] with Y ~ N(mu, sigma^2), evaluated as
/// sum_q w_q f(mu + sqrt(2)*sigma*u_q). Weights are normalized to sum to 1.
struct QuadratureRule {
  Eigen::ArrayXd nodes;
  Eigen::ArrayXd weights;
  int order = 0;

  /// Golub-Welsch construction from the Hermite Jacobi matrix.
  static QuadratureRule gauss_hermite(int order);
};

struct GridShape {
  double mu_max = 0.0;
  int mu_points = 0;
  int levels = 0; // ladder indices 0..levels-1
};

/// Sandwiching risk tables over the mu-grid x tau-ladder. Only mu >= 0 is
/// stored; the problem is symmetric in the sign of the mean. For every grid
/// point, lower <= true Bayes risk <= upper <= rho0.
struct RiskGrid {
  Eigen::ArrayXd mu;            // uniform grid on [0, mu_max]
  std::vector<double> tau;      // tau0 + k*step
  Eigen::ArrayXXd lower;        // levels x points
  Eigen::ArrayXXd upper;
  Eigen::ArrayXXd rho0;         // cached immediate-stopping risk
  int sweep_count = 0;

  double grid_step() const { return mu(1) - mu(0); }
};

/// Number of ladder levels: runs until the first level whose precision
/// reaches tau'' (= 1/(2 pi c_step^2)), where the stopping threshold clamps
/// to 0 and every state stops. Not capped here; solve() enforces k_max.
int ladder_levels(const ProblemConfig& config);

GridShape default_grid_shape(const ProblemConfig& config);

/// lower = 0, upper = rho0 everywhere; both are valid risk bounds.
RiskGrid init_bounds(const ProblemConfig& config, const GridShape& shape);
RiskGrid init_bounds(const ProblemConfig& config);

/// One Jacobi sweep of the sandwiching recursion applied to both tables:
///   new(mu, tau_k) = min(rho0(mu, tau_k),
///                        c + sum_q w_q prev(|m_q|, tau_{k+1}))
/// with m_q the posterior mean after observing y_q drawn from the prior
/// predictive N(mu, 1/tau_k + 1/r). Reads beyond the last level as 0 for the
/// lower table and rho0 for the upper table (valid bounds, so truncation
/// never breaks the sandwich); off-grid means are interpolated linearly,
/// beyond mu_max the lower table holds its last value and the upper table
/// evaluates rho0.
RiskGrid sweep(const RiskGrid& grid, const ProblemConfig& config,
               const QuadratureRule& rule);
RiskGrid sweep(const RiskGrid& grid, const ProblemConfig& config);

/// Certified region frontiers per level. A grid point is certified Stop
/// when the lower table has met rho0 (then the true risk equals rho0), and
/// certified Continue when even the upper table is strictly below rho0.
/// b_continue is the last grid point of the certified-Continue prefix,
/// b_stop the first grid point of the certified-Stop suffix (so each is
/// within one grid step inside the true frontier). b_stop is +infinity when
/// no suffix is certified. Throws NumericalError when certification is not
/// a prefix/suffix (the three-band structure failed).
std::vector<RegionBounds> extract_regions(const RiskGrid& grid,
                                          double eps_eq = 1e-9);

/// Quasi-Bayesian termination: at every level the indeterminate band is
/// narrower than the credal width delta*tau0/tau, so the credal segment can
/// never sit entirely inside the band.
bool qb_converged(const std::vector<RegionBounds>& bounds,
                  const ProblemConfig& config);

/// Full plan construction. Costs satisfying the direct-solution test get
/// closed-form levels with zero sweeps; otherwise the grid engine sweeps
/// until qb_converged. Throws SolveError when the ladder would exceed
/// k_max or the sweep cap is reached without convergence.
Plan solve(const ProblemConfig& config);

/// Bayesian-baseline variant: same engine, but iterates until every level's
/// band is narrower than band_eps (absolute), with no closed-form shortcut.
Plan solve_to_band_width(const ProblemConfig& config, double band_eps);

} // namespace qbplan
