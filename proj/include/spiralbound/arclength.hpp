#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "spiralbound/quadrature.hpp"
#include "spiralbound/spiral.hpp"

namespace spiralbound {

/// Arc length s(theta) = integral_0^theta sqrt(r'^2 + r^2) dt, adaptive
/// quadrature at relative tolerance `rel_tol`.
inline double arc_length(const SpiralSpec& spec, double theta, double rel_tol = 1e-10) {
  if (!(theta >= 0.0)) throw std::domain_error("arc_length: theta must be >= 0");
  if (theta == 0.0) return 0.0;
  return quadrature::integrate_or_throw(
      [&](double t) { return arc_speed(spec, t); }, 0.0, theta, rel_tol, "arc_length");
}

inline double arc_length_between(const SpiralSpec& spec, double theta_a, double theta_b,
                                 double rel_tol = 1e-12) {
  return quadrature::integrate_or_throw(
      [&](double t) { return arc_speed(spec, t); }, theta_a, theta_b, rel_tol,
      "arc_length_between");
}

/// Inverse of arc_length: the theta with |s(theta) - s| <= rel_tol*max(1,s).
/// Safeguarded Newton on the strictly increasing s(theta).
inline double invert_arc_length(const SpiralSpec& spec, double s, double rel_tol = 1e-10) {
  if (!(s >= 0.0)) throw std::domain_error("invert_arc_length: s must be >= 0");
  if (s == 0.0) return 0.0;

  // Bracket. s ~ a0*theta^2/2 for large theta gives a good initial guess.
  double hi = std::sqrt(2.0 * s / spec.a0) + 1.0;
  double s_hi = arc_length(spec, hi);
  int guard = 0;
  while (s_hi < s) {
    hi *= 2.0;
    s_hi = arc_length(spec, hi);
    if (++guard > 64) throw std::runtime_error("invert_arc_length: bracket failure");
  }
  double lo = 0.0;

  const double tol = rel_tol * std::max(1.0, s);
  double theta = std::min(hi, std::sqrt(2.0 * s / spec.a0));
  double s_theta = arc_length(spec, theta);
  for (int it = 0; it < 100; ++it) {
    const double f = s_theta - s;
    if (std::abs(f) <= tol) return theta;
    if (f > 0.0) hi = theta; else lo = theta;
    double next = theta - f / arc_speed(spec, theta);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    // incremental update keeps the quadrature local
    s_theta += arc_length_between(spec, theta, next);
    theta = next;
  }
  throw std::runtime_error("invert_arc_length: no convergence for s=" + std::to_string(s));
}

}  // namespace spiralbound
