#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "spiralbound/coil.hpp"
#include "spiralbound/spiral.hpp"

namespace spiralbound::fd {

enum class NodeStatus : std::uint8_t { interior = 0, dirichlet_curve = 1, dirichlet_outer = 2 };

/// Lattice discretization of a truncated planar domain. Node (i,j) with
/// i,j in [-n, n] sits at (i*h, j*h); `status` and `curve_dist` are row-major
/// with index (i+n)*(2n+1) + (j+n).
struct GridDomain {
  double h = 0.0;
  double R = 0.0;
  int n = 0;
  std::vector<NodeStatus> status;
  std::vector<float> curve_dist;          // capped at `dist_cap`
  std::vector<std::int32_t> interior_index;  // node -> interior ordinal or -1
  std::vector<std::int32_t> interior_nodes;  // interior ordinal -> node id

  static constexpr float dist_cap = 1e30f;

  int side() const { return 2 * n + 1; }
  std::size_t node_count() const { return status.size(); }
  std::size_t interior_count() const { return interior_nodes.size(); }
  std::size_t node_id(int i, int j) const {
    return std::size_t(i + n) * side() + std::size_t(j + n);
  }
  double x_of(int i) const { return i * h; }

  void finalize_interior() {
    interior_index.assign(status.size(), -1);
    interior_nodes.clear();
    for (std::size_t id = 0; id < status.size(); ++id) {
      if (status[id] == NodeStatus::interior) {
        interior_index[id] = std::int32_t(interior_nodes.size());
        interior_nodes.push_back(std::int32_t(id));
      }
    }
  }
};

/// Grid over [lo,hi]^2 with a plain inside predicate; nodes outside are
/// Dirichlet. Used for validation domains (squares, disks).
inline GridDomain build_grid_from_mask(const std::function<bool(double, double)>& inside,
                                       double lo, double hi, double h) {
  if (!(hi > lo) || !(h > 0.0)) throw std::invalid_argument("build_grid_from_mask: bad box");
  GridDomain g;
  g.h = h;
  g.R = 0.5 * (hi - lo);
  g.n = int(std::ceil(std::max(std::abs(lo), std::abs(hi)) / h)) + 1;
  g.status.assign(std::size_t(g.side()) * g.side(), NodeStatus::dirichlet_outer);
  g.curve_dist.assign(g.status.size(), GridDomain::dist_cap);
  for (int i = -g.n; i <= g.n; ++i) {
    const double x = i * h;
    if (x < lo || x > hi) continue;
    for (int j = -g.n; j <= g.n; ++j) {
      const double y = j * h;
      if (y < lo || y > hi) continue;
      if (inside(x, y)) g.status[g.node_id(i, j)] = NodeStatus::interior;
    }
  }
  g.finalize_interior();
  return g;
}

namespace detail {

struct CurvePolyline {
  std::vector<double> x, y, theta;
};

inline CurvePolyline sample_curve(const SpiralSpec& spec, double h, double R) {
  CurvePolyline pl;
  const double step = h / 4.0;
  double t = 0.0;
  const double r_stop = R + 2.0 * h;
  while (true) {
    const auto rp = radial_profile(spec, t);
    pl.x.push_back(rp.r * std::cos(t));
    pl.y.push_back(rp.r * std::sin(t));
    pl.theta.push_back(t);
    if (rp.r > r_stop) break;
    t += step / std::max(arc_speed(spec, t), 1e-12);
    if (pl.x.size() > 200'000'000)
      throw std::runtime_error("build_grid: curve sampling runaway");
  }
  return pl;
}

// distance from (px,py) to the smooth curve, seeded at parameter t0
inline double project_to_curve(const SpiralSpec& spec, double px, double py, double t0) {
  double t = t0;
  for (int it = 0; it < 6; ++it) {
    if (t < 0.0) t = 0.0;
    const auto rp = radial_profile(spec, t);
    const double ct = std::cos(t), st = std::sin(t);
    const double cx = rp.r * ct, cy = rp.r * st;
    const double tx = rp.rdot * ct - rp.r * st, ty = rp.rdot * st + rp.r * ct;
    const double exx = px - cx, eyy = py - cy;
    const double gdot = exx * tx + eyy * ty;           // d/2 dt of |e|^2
    const double cxx = (rp.rddot - rp.r) * ct - 2.0 * rp.rdot * st;
    const double cyy = (rp.rddot - rp.r) * st + 2.0 * rp.rdot * ct;
    const double gdd = -(tx * tx + ty * ty) + exx * cxx + eyy * cyy;
    if (gdd >= 0.0) break;  // not a local minimum parabola; keep the seed
    const double dt = gdot / gdd;
    t -= dt;
    if (std::abs(dt) < 1e-14 * std::max(1.0, t)) break;
  }
  t = std::max(t, 0.0);
  const auto rp = radial_profile(spec, t);
  return std::hypot(px - rp.r * std::cos(t), py - rp.r * std::sin(t));
}

}  // namespace detail

/// Truncated spiral domain: interior nodes are those at distance > h/2 from
/// the curve (the whole slit from theta = 0 is Dirichlet) and strictly inside
/// the disk of radius R.
inline GridDomain build_grid(const SpiralSpec& spec, double h, double R) {
  spec.validate();
  if (!(h > 0.0) || !(R > 0.0)) throw std::invalid_argument("build_grid: h, R must be > 0");
  if (h > spec.a0 / 8.0)
    throw std::invalid_argument("build_grid: h must not exceed a0/8 (coil unresolved)");
  const double r_first = radial_profile(spec, kTwoPi).r;
  if (R <= r_first)
    throw std::invalid_argument("build_grid: truncation radius R=" + std::to_string(R) +
                                " smaller than the first coil r(2*pi)=" +
                                std::to_string(r_first));

  // coil resolution: at least 6 interior nodes across every cross-section
  {
    double theta_R = kTwoPi;
    while (radial_profile(spec, theta_R).r < R) theta_R += 0.25;
    double dmin = std::numeric_limits<double>::infinity();
    for (int k = 0; k <= 24; ++k) {
      const double t = kTwoPi + (theta_R - kTwoPi) * k / 24.0;
      dmin = std::min(dmin, coil_width(spec, t));
    }
    if (dmin / h < 7.0)  // 6 interior nodes need ~7 spacings incl. boundary strip
      throw std::runtime_error("build_grid: coil unresolved (min coil width " +
                               std::to_string(dmin) + " spans fewer than 6 nodes at h=" +
                               std::to_string(h) + ")");
  }

  GridDomain g;
  g.h = h;
  g.R = R;
  g.n = int(std::ceil(R / h));
  g.status.assign(std::size_t(g.side()) * g.side(), NodeStatus::dirichlet_outer);
  g.curve_dist.assign(g.status.size(), GridDomain::dist_cap);

  const double R2 = R * R;
  for (int i = -g.n; i <= g.n; ++i) {
    const double x = g.x_of(i);
    for (int j = -g.n; j <= g.n; ++j) {
      const double y = g.x_of(j);
      if (x * x + y * y < R2) g.status[g.node_id(i, j)] = NodeStatus::interior;
    }
  }

  // rasterize the curve: candidate nodes near polyline samples get an exact
  // projected distance, and those within h/2 become Dirichlet
  const auto pl = detail::sample_curve(spec, h, R);
  const double near = 0.75 * h;
  for (std::size_t k = 0; k < pl.x.size(); ++k) {
    const int ic = int(std::lround(pl.x[k] / h));
    const int jc = int(std::lround(pl.y[k] / h));
    for (int di = -1; di <= 1; ++di) {
      for (int dj = -1; dj <= 1; ++dj) {
        const int i = ic + di, j = jc + dj;
        if (i < -g.n || i > g.n || j < -g.n || j > g.n) continue;
        const double x = g.x_of(i), y = g.x_of(j);
        if (std::hypot(x - pl.x[k], y - pl.y[k]) > near) continue;
        const std::size_t id = g.node_id(i, j);
        const double dist = detail::project_to_curve(spec, x, y, pl.theta[k]);
        if (dist < g.curve_dist[id]) g.curve_dist[id] = float(dist);
        if (dist <= 0.5 * h && g.status[id] != NodeStatus::dirichlet_outer)
          g.status[id] = NodeStatus::dirichlet_curve;
      }
    }
  }

  g.finalize_interior();
  if (g.interior_count() == 0) throw std::runtime_error("build_grid: empty interior");
  return g;
}

}  // namespace spiralbound::fd
