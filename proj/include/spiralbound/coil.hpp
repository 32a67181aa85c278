#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "spiralbound/spiral.hpp"

namespace spiralbound {

/// First intersection of the inward normal at theta with the previous coil.
/// `d` is the normal distance (the coil width at arc position s(theta)),
/// `tau` the curve parameter of the intersection point.
struct CoilCrossing {
  double d;
  double tau;
};

namespace detail {

// Crossing function along the normal: F(u) = |x(u)| - r(Theta(u) - 2*pi),
// where Theta(u) is the polar angle of the marching point continuously
// unwound from Theta(0) = theta. F(0) = r(theta) - r(theta-2*pi) > 0 and the
// first sign change brackets the previous-coil crossing.
struct CoilProbe {
  const SpiralSpec& spec;
  double theta;

  struct Eval {
    double F;
    double Theta;
  };

  Eval operator()(double u, double theta_ref) const {
    const auto x = fermi_map(spec, theta, u);
    const double raw = std::atan2(x[1], x[0]);
    const double k = std::round((theta_ref - raw) / kTwoPi);
    const double Theta = raw + kTwoPi * k;
    const double tau = Theta - kTwoPi;
    const double rr = std::hypot(x[0], x[1]);
    if (tau < 0.0) return {rr, Theta};  // previous coil not yet present
    return {rr - radial_profile(spec, tau).r, Theta};
  }
};

}  // namespace detail

inline CoilCrossing coil_crossing(const SpiralSpec& spec, double theta) {
  if (!(theta >= kTwoPi))
    throw std::domain_error("coil_crossing: previous coil requires theta >= 2*pi");
  const double a0 = spec.a0;
  const double step = a0 * kPi / 4.0;
  const double u_max = kTwoPi * a0 + spec.rho_gap_sup() + a0;  // stated bound + margin
  const double f_tol = 1e-12 * a0;

  detail::CoilProbe probe{spec, theta};
  double u_prev = 0.0;
  auto prev = probe(0.0, theta);
  for (double u = step; u <= u_max + 0.5 * step; u += step) {
    auto cur = probe(u, prev.Theta);
    if (prev.F > 0.0 && cur.F <= 0.0) {
      // bisect inside [u_prev, u]; the reference angle of the bracket's left
      // end keeps the unwinding unambiguous (angle moves < pi per step).
      double lo = u_prev, hi = u;
      double ref = prev.Theta;
      detail::CoilProbe::Eval mid_eval{};
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        mid_eval = probe(mid, ref);
        if (std::abs(mid_eval.F) <= f_tol || hi - lo < 1e-15 * a0) {
          return {mid, mid_eval.Theta - kTwoPi};
        }
        if (mid_eval.F > 0.0) {
          lo = mid;
          ref = mid_eval.Theta;
        } else {
          hi = mid;
        }
      }
      return {0.5 * (lo + hi), mid_eval.Theta - kTwoPi};
    }
    u_prev = u;
    prev = cur;
  }
  throw std::runtime_error(
      "coil_crossing: no crossing within 2*pi*a0 + sup|rho(.+2pi)-rho| + margin at theta=" +
      std::to_string(theta) + " (geometry inconsistency)");
}

/// Coil width d at arc position s(theta): smallest u > 0 with
/// fermi_map(theta, u) on the curve.
inline double coil_width(const SpiralSpec& spec, double theta) {
  return coil_crossing(spec, theta).d;
}

}  // namespace spiralbound
