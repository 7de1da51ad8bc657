#include "oracles.hpp"

#include <cmath>

namespace oracle {

namespace {
constexpr long double kSqrtPi = 1.7724538509055160272981674833411452L;
constexpr long double kInvSqrt2 = 0.7071067811865475244008443621048490L;

// Maclaurin series; used for |x| < 2 where it converges quickly.
long double erf_series(long double x) {
  long double term = x;
  long double sum = x;
  const long double x2 = x * x;
  for (int n = 1; n < 200; ++n) {
    term *= -x2 / n;
    const long double inc = term / (2 * n + 1);
    sum += inc;
    if (std::fabs(inc) < 1e-22L * std::fabs(sum)) break;
  }
  return sum * 2.0L / kSqrtPi;
}

// Continued fraction erfc(x) = exp(-x^2)/sqrt(pi) / (x + a1/(x + a2/(...)))
// with a_i = i/2, evaluated by the modified Lentz method; accurate for
// x >= 2.
long double erfc_cf(long double x) {
  const long double tiny = 1e-300L;
  long double f = x;
  long double C = f;
  long double D = 0.0L;
  for (int i = 1; i < 300; ++i) {
    const long double a = 0.5L * i;
    D = x + a * D;
    if (std::fabs(D) < tiny) D = tiny;
    D = 1.0L / D;
    C = x + a / C;
    if (std::fabs(C) < tiny) C = tiny;
    const long double delta = C * D;
    f *= delta;
    if (std::fabs(delta - 1.0L) < 1e-22L) break;
  }
  return std::exp(-x * x) / (kSqrtPi * f);
}
} // namespace

long double erfc_ld(long double x) {
  if (x < 0.0L) return 2.0L - erfc_ld(-x);
  if (x < 2.0L) return 1.0L - erf_series(x);
  return erfc_cf(x);
}

long double erf_ld(long double x) { return 1.0L - erfc_ld(x); }

double phi(double s) {
  return static_cast<double>(
      std::exp(-0.5L * static_cast<long double>(s) * s) /
      (kSqrtPi * 1.4142135623730950488016887242096981L));
}

double Phi(double s) {
  return static_cast<double>(0.5L *
                             erfc_ld(-static_cast<long double>(s) * kInvSqrt2));
}

double omega(double s) {
  const long double ls = s;
  const long double tail = 0.5L * erfc_ld(ls * kInvSqrt2);
  const long double pdf = std::exp(-0.5L * ls * ls) /
                          (kSqrtPi * 1.4142135623730950488016887242096981L);
  return static_cast<double>(pdf - ls * tail);
}

double omega_inverse(double y) {
  const double omega0 = omega(0.0);
  if (y >= omega0) return 0.0;
  double lo = 0.0;
  double hi = 40.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (omega(mid) > y) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double rho0(double mu, double tau) {
  const double rt = std::sqrt(tau);
  return omega(rt * std::fabs(mu)) / rt;
}

namespace {
double simpson(double a, double b, int n, double mu, double var, double taun) {
  // integrand: rho0(m, taun) * N(m; mu, var)
  if (b <= a) return 0.0;
  if (n % 2 == 1) ++n;
  const double h = (b - a) / n;
  auto f = [&](double m) {
    const double z = (m - mu);
    return rho0(m, taun) *
           std::exp(-0.5 * z * z / var) / std::sqrt(2.0 * M_PI * var);
  };
  double sum = f(a) + f(b);
  for (int i = 1; i < n; ++i) {
    sum += f(a + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
  }
  return sum * h / 3.0;
}
} // namespace

double one_step_expected_risk(double mu, double tau, double r) {
  // posterior mean m ~ N(mu, v) with v = r/(tau*(tau+r))
  const double v = r / (tau * (tau + r));
  const double sd = std::sqrt(v);
  const double taun = tau + r;
  const double lo = mu - 12.0 * sd;
  const double hi = mu + 12.0 * sd;
  // split at the |m| kink when it is inside the range
  if (lo < 0.0 && hi > 0.0) {
    return simpson(lo, 0.0, 4000, mu, v, taun) +
           simpson(0.0, hi, 4000, mu, v, taun);
  }
  return simpson(lo, hi, 8000, mu, v, taun);
}

} // namespace oracle
