#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "spiralbound/coil.hpp"
#include "spiralbound/window.hpp"

namespace spiralbound {

struct CurvatureData {
  double s;
  double gamma;
  double dgamma;   // dgamma/ds
  double ddgamma;  // d2gamma/ds2
};

namespace detail {

inline void require_admissible(const GeometryWindow& w, double s, const char* who) {
  if (s < w.s0() * (1.0 - 1e-12))
    throw std::domain_error(std::string(who) + ": s=" + std::to_string(s) +
                            " below s0=" + std::to_string(w.s0()) +
                            " (Fermi coordinates undefined there)");
}

}  // namespace detail

/// Curvature as a function of arc length, with derivatives, for s >= s0.
inline CurvatureData curvature_in_s(const GeometryWindow& w, double s) {
  detail::require_admissible(w, s, "curvature_in_s");
  const double theta = w.theta_of_s(s);
  const auto chain = curvature_chain(w.spec(), theta);
  return {s, chain.gamma, chain.dgamma_ds, chain.ddgamma_ds2};
}

/// Coil width d(s) for s >= s0.
inline double coil_width_at(const GeometryWindow& w, double s) {
  detail::require_admissible(w, s, "coil_width_at");
  return coil_width(w.spec(), w.theta_of_s(s));
}

/// The full curvature-induced potential
/// W(s,u) = gamma^2/(4(1-u gamma)^2) + u gamma''/(2(1-u gamma)^3)
///          + (5/4) u^2 gamma'^2/(1-u gamma)^4.
/// The middle term carries the sign of gamma''.
inline double potential_full(const GeometryWindow& w, double s, double u) {
  detail::require_admissible(w, s, "potential_full");
  const CurvatureData c = curvature_in_s(w, s);
  const double d = coil_width_at(w, s);
  if (!(u >= 0.0 && u <= d * (1.0 + 1e-12)))
    throw std::domain_error("potential_full: u must lie in [0, d(s)]");
  const double q = 1.0 - u * c.gamma;
  if (!(q > 0.0))
    throw std::domain_error("potential_full: singular denominator, u*gamma >= 1");
  const double q2 = q * q;
  return c.gamma * c.gamma / (4.0 * q2) + u * c.ddgamma / (2.0 * q2 * q) +
         1.25 * u * u * c.dgamma * c.dgamma / (q2 * q2);
}

/// The transverse-uniform dominating potential of the bound,
/// W~(s) = gamma^2/(4(1-gamma d)^2) + d|gamma''|/(2(1-gamma d)^3)
///         + (5/4) d^2 gamma'^2/(1-d gamma)^4.
inline double potential_effective_from(const CurvatureData& c, double d) {
  const double q = 1.0 - c.gamma * d;
  if (!(q > 0.0))
    throw std::domain_error("potential_effective: singular denominator, gamma*d >= 1");
  const double q2 = q * q;
  return c.gamma * c.gamma / (4.0 * q2) + d * std::abs(c.ddgamma) / (2.0 * q2 * q) +
         1.25 * d * d * c.dgamma * c.dgamma / (q2 * q2);
}

inline double potential_effective(const GeometryWindow& w, double s) {
  detail::require_admissible(w, s, "potential_effective");
  return potential_effective_from(curvature_in_s(w, s), coil_width_at(w, s));
}

/// j-th eigenvalue of the transverse comparison operator H(s, W~(s)):
/// (pi j / d(s))^2 - W~(s) - 1/(4 a0^2).
inline double transverse_eigenvalue_from(double d, double weff, double a0, int j) {
  if (j < 1) throw std::invalid_argument("transverse_eigenvalue: j must be >= 1");
  const double mode = kPi * j / d;
  return mode * mode - weff - 1.0 / (4.0 * a0 * a0);
}

inline double transverse_eigenvalue(const GeometryWindow& w, double s, int j) {
  if (j < 1) throw std::invalid_argument("transverse_eigenvalue: j must be >= 1");
  detail::require_admissible(w, s, "transverse_eigenvalue");
  const double d = coil_width_at(w, s);
  const double weff = potential_effective_from(curvature_in_s(w, s), d);
  return transverse_eigenvalue_from(d, weff, w.a0(), j);
}

}  // namespace spiralbound
