#pragma once

namespace qbplan {

// Standard Gaussian kernel used by every region computation. All functions
// are pure and reentrant.
//
// omega(s) = phi(s) - s * (1 - Phi(s)) is the linear-loss integral
// E[(X - s)^+] for X ~ N(0,1). It is strictly decreasing on [0, inf) with
// range (0, phi(0)], which makes it invertible; omega_inverse is its inverse
// with the convention omega_inverse(y) = 0 for y >= phi(0).
//
// std_normal_cdf delegates to erfc, whose absolute error is a few ulp —
// well inside the 1e-12 budget required here (region boundaries amplify cdf
// error through omega_inverse).

/// Density of N(0,1).
double std_normal_pdf(double s);

/// Distribution function of N(0,1); absolute error <= 1e-12.
double std_normal_cdf(double s);

/// Linear-loss integral; requires s >= 0.
double omega(double s);

/// Inverse of omega on (0, phi(0)]; clamps to 0 for y >= phi(0).
/// Requires y > 0. Absolute tolerance 1e-12 on the returned abscissa.
double omega_inverse(double y);

/// Risk of deciding immediately under belief N(mu, 1/tau):
/// omega(sqrt(tau)*|mu|)/sqrt(tau). Requires tau > 0.
double stop_risk(double mu, double tau);

/// phi(0) = 1/sqrt(2*pi), the maximum of omega.
double omega_max();

} // namespace qbplan
