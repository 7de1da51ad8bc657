#include "qbplan/special_functions.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qbplan {

namespace {
constexpr double kInvSqrt2Pi = 0.3989422804014326779;
constexpr double kInvSqrt2 = 0.7071067811865475244;

void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) {
    throw std::invalid_argument(std::string(what) + ": non-finite argument");
  }
}
} // namespace

double std_normal_pdf(double s) {
  require_finite(s, "std_normal_pdf");
  return kInvSqrt2Pi * std::exp(-0.5 * s * s);
}

double std_normal_cdf(double s) {
  require_finite(s, "std_normal_cdf");
  return 0.5 * std::erfc(-s * kInvSqrt2);
}

double omega(double s) {
  require_finite(s, "omega");
  if (s < 0.0) {
    throw std::invalid_argument("omega: s must be >= 0");
  }
  // 1 - Phi(s) written as erfc(s/sqrt(2))/2 to avoid cancellation in the tail.
  // Far out both terms underflow together and the subtraction can round a
  // hair below zero; clamp, the function is positive.
  const double tail = 0.5 * std::erfc(s * kInvSqrt2);
  return std::max(0.0, std_normal_pdf(s) - s * tail);
}

double omega_max() { return kInvSqrt2Pi; }

double omega_inverse(double y) {
  require_finite(y, "omega_inverse");
  if (y <= 0.0) {
    throw std::invalid_argument("omega_inverse: y must be > 0");
  }
  if (y >= kInvSqrt2Pi) {
    return 0.0;
  }
  // Bracketed bisection with a Newton polish. omega is smooth and strictly
  // decreasing (omega' = -(1 - Phi)), so the bracket [0, 40] always closes.
  double lo = 0.0;
  double hi = 40.0;
  for (int i = 0; i < 96; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (omega(mid) > y) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo < 1e-13) break;
  }
  double s = 0.5 * (lo + hi);
  for (int i = 0; i < 4; ++i) {
    const double deriv = -(0.5 * std::erfc(s * kInvSqrt2));
    if (deriv == 0.0) break;
    const double step = (omega(s) - y) / deriv;
    const double next = s - step;
    if (next < lo || next > hi) break;
    s = next;
    if (std::abs(step) < 1e-14) break;
  }
  return s < 0.0 ? 0.0 : s;
}

double stop_risk(double mu, double tau) {
  require_finite(mu, "stop_risk");
  if (!(tau > 0.0) || !std::isfinite(tau)) {
    throw std::invalid_argument("stop_risk: tau must be > 0");
  }
  const double root_tau = std::sqrt(tau);
  return omega(root_tau * std::abs(mu)) / root_tau;
}

} // namespace qbplan
