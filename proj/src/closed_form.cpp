#include "qbplan/closed_form.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qbplan/special_functions.hpp"

namespace qbplan {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kConditionMargin = 1e-12;

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw std::invalid_argument(std::string(what) + " must be > 0");
  }
}

// Max of g(z) = z*omega(z*beta) over [z_lo, z_hi]: dense scan, then
// golden-section refinement on the best bracket. g is smooth; the scan makes
// the refinement robust without assuming unimodality.
double max_g(double beta, double z_lo, double z_hi) {
  constexpr int kScan = 1024;
  auto g = [beta](double z) { return z * omega(z * beta); };
  double best_z = z_lo;
  double best = g(z_lo);
  for (int i = 1; i <= kScan; ++i) {
    const double z = z_lo + (z_hi - z_lo) * i / kScan;
    const double v = g(z);
    if (v > best) {
      best = v;
      best_z = z;
    }
  }
  const double step = (z_hi - z_lo) / kScan;
  double a = std::max(z_lo, best_z - step);
  double b = std::min(z_hi, best_z + step);
  const double inv_phi = 0.6180339887498949;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = g(x1);
  double f2 = g(x2);
  while (b - a > 1e-10) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = g(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = g(x1);
    }
  }
  return std::max(best, std::max(f1, f2));
}
} // namespace

double tau_prime(double c, double r) {
  require_positive(c, "tau_prime: c");
  require_positive(r, "tau_prime: r");
  const double half_r = 0.5 * r;
  return std::sqrt(half_r * half_r + half_r / (kPi * c * c)) - half_r;
}

double tau_double_prime(double c) {
  require_positive(c, "tau_double_prime: c");
  return 1.0 / (2.0 * kPi * c * c);
}

CheckInterval check_interval(double c, double r) {
  return CheckInterval{1.0 / std::sqrt(tau_double_prime(c)),
                       1.0 / std::sqrt(tau_prime(c, r))};
}

bool theorem1_condition(double c, double r, double tau, double delta) {
  require_positive(c, "theorem1_condition: c");
  require_positive(r, "theorem1_condition: r");
  require_positive(tau, "theorem1_condition: tau");
  if (delta < 0.0) {
    throw std::invalid_argument("theorem1_condition: delta must be >= 0");
  }
  const CheckInterval zi = check_interval(c, r);
  if (zi.empty()) {
    return true;
  }
  const double g_max = max_g(0.5 * delta * tau, zi.z_lo, zi.z_hi);
  // Strict "<" with a fixed margin so boundary costs do not flap.
  return g_max < c - kConditionMargin;
}

RegionBounds closed_form_regions(double c, double r, double tau_level) {
  require_positive(c, "closed_form_regions: c");
  require_positive(r, "closed_form_regions: r");
  require_positive(tau_level, "closed_form_regions: tau_level");
  const double k = std::sqrt(tau_level * (tau_level + r) / r);
  const double root_tau = std::sqrt(tau_level);
  RegionBounds out;
  out.tau_level = tau_level;
  out.b_continue = omega_inverse(c * k) / k;
  out.b_stop = std::max(0.0, omega_inverse(c * root_tau) / root_tau);
  out.provenance = Provenance::ClosedForm;
  return out;
}

double min_closed_form_cost(double r, double tau, double delta, double c_hi) {
  require_positive(c_hi, "min_closed_form_cost: c_hi");
  if (!theorem1_condition(c_hi, r, tau, delta)) {
    throw std::domain_error("min_closed_form_cost: no closed-form cost in range");
  }
  double hi = c_hi;
  double lo = c_hi;
  for (int i = 0; i < 80 && lo > 1e-300; ++i) {
    lo *= 0.5;
    if (!theorem1_condition(lo, r, tau, delta)) break;
    hi = lo;
  }
  if (theorem1_condition(lo, r, tau, delta)) {
    return lo; // satisfied arbitrarily far down; report the last probe
  }
  while (hi - lo > 1e-5) {
    const double mid = 0.5 * (lo + hi);
    if (theorem1_condition(mid, r, tau, delta)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

double indifference_cost(double mu_prime, double tau, double r) {
  require_positive(mu_prime, "indifference_cost: mu_prime");
  require_positive(tau, "indifference_cost: tau");
  require_positive(r, "indifference_cost: r");
  const double k = std::sqrt(tau * (tau + r) / r);
  return omega(k * mu_prime) / k;
}

} // namespace qbplan
