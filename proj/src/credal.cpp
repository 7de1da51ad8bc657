#include "qbplan/credal.hpp"

#include <cmath>
#include <stdexcept>

#include "qbplan/special_functions.hpp"

namespace qbplan {

namespace {
void check_state(const CredalState& s) {
  if (!(s.tau > 0.0) || !std::isfinite(s.tau)) {
    throw std::invalid_argument("credal: tau must be > 0");
  }
  if (!std::isfinite(s.mu_lo) || !std::isfinite(s.mu_hi) || s.mu_lo > s.mu_hi) {
    throw std::invalid_argument("credal: requires mu_lo <= mu_hi, both finite");
  }
}

void check_obs(const Observation& o) {
  if (!std::isfinite(o.x)) {
    throw std::invalid_argument("credal: observation value must be finite");
  }
  if (!(o.r_eff > 0.0) || !std::isfinite(o.r_eff)) {
    throw std::invalid_argument("credal: observation precision must be > 0");
  }
}
} // namespace

CredalState update(const CredalState& state, const Observation& obs) {
  check_state(state);
  check_obs(obs);
  const double tau_new = state.tau + obs.r_eff;
  // The shrinkage map is increasing in mu, so the ordering of the extreme
  // means is preserved.
  CredalState out;
  out.tau = tau_new;
  out.mu_lo = (state.tau * state.mu_lo + obs.r_eff * obs.x) / tau_new;
  out.mu_hi = (state.tau * state.mu_hi + obs.r_eff * obs.x) / tau_new;
  out.obs_count = state.obs_count + 1;
  return out;
}

CredalState update_batch(const CredalState& state, std::int64_t n,
                         double x_bar, double r_eff) {
  check_state(state);
  if (n < 1) {
    throw std::invalid_argument("update_batch: n must be >= 1");
  }
  check_obs(Observation{x_bar, r_eff});
  const double nr = static_cast<double>(n) * r_eff;
  const double tau_new = state.tau + nr;
  CredalState out;
  out.tau = tau_new;
  out.mu_lo = (state.tau * state.mu_lo + nr * x_bar) / tau_new;
  out.mu_hi = (state.tau * state.mu_hi + nr * x_bar) / tau_new;
  out.obs_count = state.obs_count + n;
  return out;
}

double predicted_width(double delta0, double tau0, std::int64_t n, double r) {
  if (!(tau0 > 0.0) || !(r > 0.0)) {
    throw std::invalid_argument("predicted_width: tau0 and r must be > 0");
  }
  if (delta0 < 0.0 || n < 0) {
    throw std::invalid_argument("predicted_width: delta0 and n must be >= 0");
  }
  return delta0 * tau0 / (tau0 + static_cast<double>(n) * r);
}

EventBounds event_bounds(const CredalState& state) {
  check_state(state);
  const double root_tau = std::sqrt(state.tau);
  return EventBounds{std_normal_cdf(state.mu_lo * root_tau),
                     std_normal_cdf(state.mu_hi * root_tau)};
}

Observation lump(const std::vector<Observation>& observations) {
  if (observations.empty()) {
    throw std::invalid_argument("lump: empty observation list");
  }
  const double r = observations.front().r_eff;
  double sum = 0.0;
  for (const Observation& o : observations) {
    check_obs(o);
    if (std::abs(o.r_eff - r) > 1e-12 * std::max(1.0, std::abs(r))) {
      throw std::invalid_argument("lump: observations must share one precision");
    }
    sum += o.x;
  }
  const double k = static_cast<double>(observations.size());
  // The mean of k observations has variance 1/(k*r), hence precision k*r.
  return Observation{sum / k, k * r};
}

} // namespace qbplan
