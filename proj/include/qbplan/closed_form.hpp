#pragma once

#include "qbplan/regions.hpp"

namespace qbplan {

/// Precision landmarks of the direct-solution test. For a cost c and
/// observation precision r the test inspects standard deviations
/// z in [z_lo, z_hi] = [1/sqrt(tau_dprime), 1/sqrt(tau_prime)].
struct CheckInterval {
  double z_lo = 0.0;
  double z_hi = 0.0;
  bool empty() const { return z_lo > z_hi; }
};

/// tau' = sqrt((r/2)^2 + (r/2)/(pi c^2)) - r/2; the precision beyond which a
/// single observation can no longer pay for itself at the segment center.
double tau_prime(double c, double r);

/// tau'' = 1/(2 pi c^2); the precision beyond which even the worst stopping
/// risk is below the cost of one observation.
double tau_double_prime(double c);

CheckInterval check_interval(double c, double r);

/// True when max over z in [z_lo, z_hi] of z*omega(z*delta*tau/2) is
/// strictly below c. Grants direct (no-iteration) regions for every prior
/// with width <= delta and precision >= tau. An empty interval counts as
/// satisfied: large costs are the direct regime.
bool theorem1_condition(double c, double r, double tau, double delta);

/// Direct region thresholds at one precision level:
///   b_continue = U(c*k)/k with k = sqrt(tau*(tau+r)/r)
///   b_stop     = max(0, U(c*sqrt(tau))/sqrt(tau))
/// Only meaningful when theorem1_condition holds for the governing prior.
RegionBounds closed_form_regions(double c, double r, double tau_level);

/// Smallest cost in (0, c_hi] whose condition still holds, by bisection to
/// 1e-5 absolute; monotonicity of the condition in c makes the bisection
/// valid. Throws when the condition already fails at c_hi.
double min_closed_form_cost(double r, double tau, double delta, double c_hi);

/// Cost for which mu_prime is exactly the Continue boundary at precision
/// tau: omega(k*mu_prime)/k with k = sqrt(tau*(tau+r)/r).
double indifference_cost(double mu_prime, double tau, double r);

} // namespace qbplan
