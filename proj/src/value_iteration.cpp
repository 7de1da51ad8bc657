#include "qbplan/value_iteration.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "qbplan/closed_form.hpp"
#include "qbplan/errors.hpp"
#include "qbplan/special_functions.hpp"

namespace qbplan {

namespace {
constexpr double kSqrt2 = 1.4142135623730950488;

double interp_clamped(const Eigen::ArrayXXd& table, int level,
                      const Eigen::ArrayXd& mu, double h, double am) {
  // am is on-grid here; uniform spacing.
  const int n = static_cast<int>(mu.size());
  int idx = static_cast<int>(am / h);
  if (idx > n - 2) idx = n - 2;
  const double frac = (am - mu(idx)) / h;
  return table(level, idx) * (1.0 - frac) + table(level, idx + 1) * frac;
}
} // namespace

QuadratureRule QuadratureRule::gauss_hermite(int order) {
  if (order < 1) {
    throw std::invalid_argument("gauss_hermite: order must be >= 1");
  }
  QuadratureRule rule;
  rule.order = order;
  if (order == 1) {
    rule.nodes = Eigen::ArrayXd::Zero(1);
    rule.weights = Eigen::ArrayXd::Ones(1);
    return rule;
  }
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(order);
  Eigen::VectorXd sub(order - 1);
  for (int k = 1; k < order; ++k) {
    sub(k - 1) = std::sqrt(0.5 * k);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  if (es.info() != Eigen::Success) {
    throw NumericalError("gauss_hermite: eigendecomposition failed");
  }
  rule.nodes = es.eigenvalues().array();
  // First eigenvector components squared are the weights up to the sqrt(pi)
  // normalization, which cancels when rescaling to unit sum.
  Eigen::ArrayXd w = es.eigenvectors().row(0).array().square();
  rule.weights = w / w.sum();
  return rule;
}

int ladder_levels(const ProblemConfig& config) {
  const double step = config.step_precision();
  const double target = tau_double_prime(config.step_cost());
  int k = 0;
  while (config.tau0 + k * step < target) {
    ++k;
    if (k > 1'000'000) {
      throw NumericalError("ladder_levels: ladder does not terminate");
    }
  }
  return k + 1;
}

GridShape default_grid_shape(const ProblemConfig& config) {
  GridShape shape;
  shape.mu_max = std::max(std::abs(config.mu_lo), std::abs(config.mu_hi)) +
                 config.solver.mu_pad / std::sqrt(config.tau0);
  shape.mu_points = config.solver.mu_points;
  shape.levels = ladder_levels(config);
  return shape;
}

RiskGrid init_bounds(const ProblemConfig& config, const GridShape& shape) {
  config.validate();
  if (shape.mu_points < 2 || !(shape.mu_max > 0.0) || shape.levels < 1) {
    throw std::invalid_argument("init_bounds: invalid grid shape");
  }
  RiskGrid grid;
  grid.mu = Eigen::ArrayXd::LinSpaced(shape.mu_points, 0.0, shape.mu_max);
  grid.tau.resize(shape.levels);
  const double step = config.step_precision();
  for (int k = 0; k < shape.levels; ++k) {
    grid.tau[k] = config.tau0 + k * step;
  }
  grid.lower = Eigen::ArrayXXd::Zero(shape.levels, shape.mu_points);
  grid.upper.resize(shape.levels, shape.mu_points);
  grid.rho0.resize(shape.levels, shape.mu_points);
  for (int k = 0; k < shape.levels; ++k) {
    for (int j = 0; j < shape.mu_points; ++j) {
      grid.rho0(k, j) = stop_risk(grid.mu(j), grid.tau[k]);
    }
  }
  grid.upper = grid.rho0;
  grid.sweep_count = 0;
  return grid;
}

RiskGrid init_bounds(const ProblemConfig& config) {
  return init_bounds(config, default_grid_shape(config));
}

RiskGrid sweep(const RiskGrid& grid, const ProblemConfig& config,
               const QuadratureRule& rule) {
  const int levels = static_cast<int>(grid.tau.size());
  const int npts = static_cast<int>(grid.mu.size());
  const double r = config.step_precision();
  const double c = config.step_cost();
  const double h = grid.grid_step();
  const double mu_max = grid.mu(npts - 1);

  RiskGrid out = grid;
  out.sweep_count = grid.sweep_count + 1;

  Eigen::ArrayXd m_shift(rule.order);
  for (int k = 0; k < levels; ++k) {
    const double tau = grid.tau[k];
    const double tau_next = tau + r;
    // Posterior mean after one epoch: m = mu + (r/(tau+r)) * (y - mu) with
    // y ~ N(mu, 1/tau + 1/r), so m = mu + shift_q at the quadrature nodes.
    const double sigma_pred = std::sqrt(1.0 / tau + 1.0 / r);
    const double scale = r * kSqrt2 * sigma_pred / tau_next;
    m_shift = scale * rule.nodes;
    const bool has_next = k + 1 < levels;

    for (int j = 0; j < npts; ++j) {
      const double mu_j = grid.mu(j);
      double acc_lo = 0.0;
      double acc_up = 0.0;
      for (int q = 0; q < rule.order; ++q) {
        const double am = std::abs(mu_j + m_shift(q));
        double v_lo;
        double v_up;
        if (has_next) {
          if (am >= mu_max) {
            v_lo = grid.lower(k + 1, npts - 1);
            v_up = stop_risk(am, tau_next);
          } else {
            v_lo = interp_clamped(grid.lower, k + 1, grid.mu, h, am);
            v_up = interp_clamped(grid.upper, k + 1, grid.mu, h, am);
          }
        } else {
          v_lo = 0.0;
          v_up = stop_risk(am, tau_next);
        }
        acc_lo += rule.weights(q) * v_lo;
        acc_up += rule.weights(q) * v_up;
      }
      const double rho0_kj = grid.rho0(k, j);
      const double new_lo = std::min(rho0_kj, c + acc_lo);
      const double new_up = std::min(rho0_kj, c + acc_up);
      if (!std::isfinite(new_lo) || !std::isfinite(new_up)) {
        std::ostringstream oss;
        oss << "sweep: non-finite value at level " << k << " (tau=" << tau
            << "), mu=" << mu_j << ", lower=" << new_lo << ", upper=" << new_up;
        throw NumericalError(oss.str());
      }
      out.lower(k, j) = new_lo;
      out.upper(k, j) = new_up;
    }
  }
  return out;
}

RiskGrid sweep(const RiskGrid& grid, const ProblemConfig& config) {
  return sweep(grid, config, QuadratureRule::gauss_hermite(config.solver.quad_order));
}

std::vector<RegionBounds> extract_regions(const RiskGrid& grid, double eps_eq) {
  const int levels = static_cast<int>(grid.tau.size());
  const int npts = static_cast<int>(grid.mu.size());
  std::vector<RegionBounds> out;
  out.reserve(levels);

  for (int k = 0; k < levels; ++k) {
    // Continue certificates must form a prefix, Stop certificates a suffix;
    // anything else means the three-band structure failed.
    int cont_end = 0; // one past the certified-Continue prefix
    while (cont_end < npts &&
           grid.upper(k, cont_end) < grid.rho0(k, cont_end) - eps_eq) {
      ++cont_end;
    }
    int stop_begin = npts; // start of the certified-Stop suffix
    while (stop_begin > 0) {
      const int j = stop_begin - 1;
      const double r0 = grid.rho0(k, j);
      if (grid.lower(k, j) >= r0 - eps_eq * std::max(1.0, r0)) {
        stop_begin = j;
      } else {
        break;
      }
    }
    for (int j = cont_end; j < npts; ++j) {
      if (grid.upper(k, j) < grid.rho0(k, j) - eps_eq) {
        std::ostringstream oss;
        oss << "extract_regions: non-contiguous Continue certification at "
               "level "
            << k << " (tau=" << grid.tau[k] << "): prefix ends at mu="
            << grid.mu(cont_end == 0 ? 0 : cont_end - 1)
            << " but mu=" << grid.mu(j) << " is certified";
        throw NumericalError(oss.str());
      }
    }
    for (int j = 0; j < stop_begin; ++j) {
      const double r0 = grid.rho0(k, j);
      if (grid.lower(k, j) >= r0 - eps_eq * std::max(1.0, r0)) {
        std::ostringstream oss;
        oss << "extract_regions: non-contiguous Stop certification at level "
            << k << " (tau=" << grid.tau[k] << "): suffix starts at mu="
            << grid.mu(stop_begin) << " but mu=" << grid.mu(j)
            << " is certified";
        throw NumericalError(oss.str());
      }
    }

    RegionBounds b;
    b.tau_level = grid.tau[k];
    b.provenance = Provenance::Iterated;
    b.b_continue = cont_end == 0 ? 0.0 : grid.mu(cont_end - 1);
    b.b_stop = stop_begin == npts ? std::numeric_limits<double>::infinity()
                                  : grid.mu(stop_begin);
    out.push_back(b);
  }
  return out;
}

bool qb_converged(const std::vector<RegionBounds>& bounds,
                  const ProblemConfig& config) {
  const double delta = config.delta();
  for (const RegionBounds& b : bounds) {
    const double band = b.b_stop - b.b_continue;
    if (band == 0.0) continue;
    if (!(band < delta * config.tau0 / b.tau_level)) {
      return false;
    }
  }
  return true;
}

Plan solve(const ProblemConfig& config) {
  config.validate();
  const double c = config.step_cost();
  const double r = config.step_precision();
  const int levels = ladder_levels(config);

  if (theorem1_condition(c, r, config.tau0, config.delta())) {
    Plan plan;
    plan.config = config;
    plan.sweep_count = 0;
    plan.levels.reserve(levels);
    for (int k = 0; k < levels; ++k) {
      plan.levels.push_back(closed_form_regions(c, r, config.tau0 + k * r));
    }
    return plan;
  }

  if (levels - 1 > config.solver.k_max) {
    std::ostringstream oss;
    oss << "solve: ladder needs " << levels - 1 << " steps, k_max="
        << config.solver.k_max << " (consider lumped observations)";
    throw SolveError(oss.str(), {}, 0);
  }

  const QuadratureRule rule =
      QuadratureRule::gauss_hermite(config.solver.quad_order);
  RiskGrid grid = init_bounds(config);
  std::vector<RegionBounds> bounds;
  for (int i = 1; i <= config.solver.max_sweeps; ++i) {
    grid = sweep(grid, config, rule);
    bounds = extract_regions(grid, config.solver.eps_eq);
    if (qb_converged(bounds, config)) {
      Plan plan;
      plan.config = config;
      plan.levels = std::move(bounds);
      plan.sweep_count = i;
      return plan;
    }
  }
  std::ostringstream oss;
  oss << "solve: no quasi-Bayesian convergence after "
      << config.solver.max_sweeps << " sweeps";
  throw SolveError(oss.str(), std::move(bounds), config.solver.max_sweeps);
}

Plan solve_to_band_width(const ProblemConfig& config, double band_eps) {
  config.validate();
  if (!(band_eps > 0.0)) {
    throw std::invalid_argument("solve_to_band_width: band_eps must be > 0");
  }
  const int levels = ladder_levels(config);
  if (levels - 1 > config.solver.k_max) {
    std::ostringstream oss;
    oss << "solve_to_band_width: ladder needs " << levels - 1
        << " steps, k_max=" << config.solver.k_max;
    throw SolveError(oss.str(), {}, 0);
  }
  const QuadratureRule rule =
      QuadratureRule::gauss_hermite(config.solver.quad_order);
  RiskGrid grid = init_bounds(config);
  std::vector<RegionBounds> bounds;
  for (int i = 1; i <= config.solver.max_sweeps; ++i) {
    grid = sweep(grid, config, rule);
    bounds = extract_regions(grid, config.solver.eps_eq);
    bool ok = true;
    for (const RegionBounds& b : bounds) {
      const double band = b.b_stop - b.b_continue;
      if (band != 0.0 && !(band < band_eps)) {
        ok = false;
        break;
      }
    }
    if (ok) {
      Plan plan;
      plan.config = config;
      plan.levels = std::move(bounds);
      plan.sweep_count = i;
      return plan;
    }
  }
  std::ostringstream oss;
  oss << "solve_to_band_width: band " << band_eps << " not reached after "
      << config.solver.max_sweeps << " sweeps";
  throw SolveError(oss.str(), std::move(bounds), config.solver.max_sweeps);
}

} // namespace qbplan
