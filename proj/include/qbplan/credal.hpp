#pragma once

#include <cstdint>
#include <vector>

namespace qbplan {

/// One measurement together with its precision. Lumped observations carry
/// the effective precision of the averaged batch (k observations of
/// precision r lump to precision k*r).
struct Observation {
  double x = 0.0;
  double r_eff = 1.0;
};

/// The credal set of Gaussian beliefs at a common precision: every member is
/// N(theta; mu, 1/tau) with mu in [mu_lo, mu_hi]. Bayes updating moves both
/// extreme means through the same affine map, so the segment stays a segment
/// and its width shrinks deterministically.
struct CredalState {
  double tau = 1.0;
  double mu_lo = 0.0;
  double mu_hi = 0.0;
  std::int64_t obs_count = 0;

  double width() const { return mu_hi - mu_lo; }
  double midpoint() const { return 0.5 * (mu_lo + mu_hi); }
};

/// Lower/upper probability of the event {theta > 0} over the credal set.
struct EventBounds {
  double p_lower = 0.0;
  double p_upper = 0.0;
};

/// Posterior segment after absorbing one observation.
CredalState update(const CredalState& state, const Observation& obs);

/// Posterior segment after n observations with sample mean x_bar, each of
/// precision r_eff. Equivalent to n sequential updates sharing that mean.
CredalState update_batch(const CredalState& state, std::int64_t n,
                         double x_bar, double r_eff);

/// Width of the segment after n observations of precision r starting from
/// width delta0 at precision tau0: delta0 * tau0 / (tau0 + n*r).
double predicted_width(double delta0, double tau0, std::int64_t n, double r);

/// Extrema of P(theta > 0) over the credal set; attained at the extreme
/// means because the event probability is monotone in the mean.
EventBounds event_bounds(const CredalState& state);

/// Average k equal-precision observations into one effective observation
/// with precision k*r. Rejects an empty list and mixed precisions.
Observation lump(const std::vector<Observation>& observations);

} // namespace qbplan
