#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "spiralbound/coil.hpp"
#include "spiralbound/window.hpp"

namespace spiralbound {

namespace detail {

inline double shoelace_spiral_arc(const SpiralSpec& spec, double tau, double theta0,
                                  int n) {
  // closed polygon: arc samples tau -> theta0; shoelace closes last -> first,
  // which is exactly the straight normal segment of the region boundary.
  double area = 0.0;
  double px = 0.0, py = 0.0, fx = 0.0, fy = 0.0;
  for (int i = 0; i < n; ++i) {
    const double t = tau + (theta0 - tau) * i / double(n - 1);
    const double r = radial_profile(spec, t).r;
    const double x = r * std::cos(t), y = r * std::sin(t);
    if (i == 0) {
      fx = x; fy = y;
    } else {
      area += px * y - py * x;
    }
    px = x; py = y;
  }
  area += px * fy - py * fx;
  return 0.5 * area;
}

inline bool segments_intersect(double ax, double ay, double bx, double by, double cx,
                               double cy, double dx, double dy) {
  auto orient = [](double ox, double oy, double ux, double uy, double vx, double vy) {
    return (ux - ox) * (vy - oy) - (uy - oy) * (vx - ox);
  };
  const double o1 = orient(ax, ay, bx, by, cx, cy);
  const double o2 = orient(ax, ay, bx, by, dx, dy);
  const double o3 = orient(cx, cy, dx, dy, ax, ay);
  const double o4 = orient(cx, cy, dx, dy, bx, by);
  return o1 * o2 < 0.0 && o3 * o4 < 0.0;
}

}  // namespace detail

/// Area of the central region cut off at theta0: the Jordan curve formed by
/// the spiral arc from tau* (the curve parameter of the inner endpoint of the
/// normal at theta0) to theta0, closed by that normal segment. The inner
/// spiral slit has measure zero and is ignored. Shoelace on a polyline with
/// n >= 4096 samples, Richardson-refined once.
inline double omega2_volume_at(const SpiralSpec& spec, double theta0, int n = 4096) {
  if (n < 4096) n = 4096;
  const CoilCrossing cross = coil_crossing(spec, theta0);
  const double tau = cross.tau;
  if (!(tau < theta0))
    throw std::runtime_error("omega2_volume: degenerate region (tau* >= theta0)");

  // the closing segment must not cross the arc away from its endpoints
  {
    const int m = 512;
    const double r0 = radial_profile(spec, theta0).r;
    const double ax = r0 * std::cos(theta0), ay = r0 * std::sin(theta0);
    const auto inner = fermi_map(spec, theta0, cross.d);
    double px = 0.0, py = 0.0;
    for (int i = 0; i < m; ++i) {
      const double frac_lo = double(i) / m, frac_hi = double(i + 1) / m;
      const double t = tau + (theta0 - tau) * frac_lo;
      const double r = radial_profile(spec, t).r;
      const double x = r * std::cos(t), y = r * std::sin(t);
      if (i > 0 && frac_lo > 1.0 / m && frac_hi < 1.0 - 1.0 / m &&
          detail::segments_intersect(ax, ay, inner[0], inner[1], px, py, x, y))
        throw std::runtime_error("omega2_volume: boundary polyline self-intersects");
      px = x; py = y;
    }
  }

  const double a1 = detail::shoelace_spiral_arc(spec, tau, theta0, n);
  const double a2 = detail::shoelace_spiral_arc(spec, tau, theta0, 2 * n);
  const double area = (4.0 * a2 - a1) / 3.0;
  if (!(area > 0.0)) throw std::runtime_error("omega2_volume: nonpositive area");
  return area;
}

/// vol(Omega_2) for the window's cutoff theta0 = theta(s0).
inline double omega2_volume(const GeometryWindow& w) {
  return omega2_volume_at(w.spec(), w.theta0());
}

}  // namespace spiralbound
