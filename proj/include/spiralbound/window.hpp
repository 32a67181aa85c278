#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "spiralbound/arclength.hpp"
#include "spiralbound/coil.hpp"
#include "spiralbound/quadrature.hpp"
#include "spiralbound/spiral.hpp"

namespace spiralbound {

/// One sampled row of the admissibility table.
struct WindowRow {
  double theta;
  double s;
  double gamma;
  double dgamma_ds;
  double ddgamma_ds2;
  double d;  // coil width at s
};

struct WindowOptions {
  double grid_ratio = 1.05;  // geometric theta grid, dense near theta = 2*pi
  int bump_refine = 48;      // extra linear samples across a bump's influence
};

/// The admissible Fermi region of a spiral: sampled tables on
/// theta in [2*pi, theta(horizon)], the cutoff s0 where d*gamma stays below
/// 1 - margin, and an anchored s <-> theta inversion.
class GeometryWindow {
 public:
  GeometryWindow(SpiralSpec spec, double horizon, double margin,
                 std::vector<WindowRow> rows, std::size_t s0_index,
                 std::vector<std::string> notes)
      : spec_(std::move(spec)),
        horizon_(horizon),
        margin_(margin),
        rows_(std::move(rows)),
        s0_index_(s0_index),
        notes_(std::move(notes)) {}

  const SpiralSpec& spec() const { return spec_; }
  double a0() const { return spec_.a0; }
  double s0() const { return rows_[s0_index_].s; }
  double theta0() const { return rows_[s0_index_].theta; }
  double horizon() const { return horizon_; }
  double margin() const { return margin_; }
  std::span<const WindowRow> rows() const { return rows_; }
  std::span<const WindowRow> admissible_rows() const {
    return std::span<const WindowRow>(rows_).subspan(s0_index_);
  }
  const std::vector<std::string>& notes() const { return notes_; }

  bool contains_s(double s) const {
    return s >= rows_.front().s * (1.0 - 1e-12) && s <= rows_.back().s * (1.0 + 1e-12);
  }

  /// theta(s) on the tabulated range; safeguarded Newton from the bracketing
  /// table rows, quadrature anchored at the nearest row.
  double theta_of_s(double s) const {
    if (!contains_s(s))
      throw std::domain_error("theta_of_s: s=" + std::to_string(s) +
                              " outside the tabulated window");
    s = std::clamp(s, rows_.front().s, rows_.back().s);
    auto it = std::lower_bound(rows_.begin(), rows_.end(), s,
                               [](const WindowRow& r, double v) { return r.s < v; });
    if (it == rows_.begin()) return rows_.front().theta;
    const WindowRow& hi_row = *it;
    const WindowRow& lo_row = *(it - 1);
    if (hi_row.s == s) return hi_row.theta;

    double lo = lo_row.theta, hi = hi_row.theta;
    double theta = lo + (hi - lo) * (s - lo_row.s) / (hi_row.s - lo_row.s);
    double s_acc = lo_row.s + arc_length_between(spec_, lo_row.theta, theta);
    const double tol = 1e-12 * std::max(1.0, s);
    for (int it2 = 0; it2 < 60; ++it2) {
      const double f = s_acc - s;
      if (std::abs(f) <= tol) return theta;
      if (f > 0.0) hi = theta; else lo = theta;
      double next = theta - f / arc_speed(spec_, theta);
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      s_acc += arc_length_between(spec_, theta, next);
      theta = next;
    }
    throw std::runtime_error("theta_of_s: no convergence at s=" + std::to_string(s));
  }

 private:
  SpiralSpec spec_;
  double horizon_;
  double margin_;
  std::vector<WindowRow> rows_;
  std::size_t s0_index_;
  std::vector<std::string> notes_;
};

/// Builds the sampled window and locates the smallest sampled s0 with
/// d(s)*gamma(s) <= 1 - margin for every sampled s in [s0, horizon].
/// Beyond the horizon, admissibility is extrapolated from the fitted decay of
/// d*gamma (expected ~ s^(-1/2)) and logged in the window notes.
inline GeometryWindow find_s0(const SpiralSpec& spec, double horizon, double margin,
                              WindowOptions opts = {}) {
  spec.validate();
  if (!(horizon > 0.0)) throw std::invalid_argument("find_s0: horizon must be > 0");
  if (!(margin > 0.0 && margin < 1.0))
    throw std::invalid_argument("find_s0: margin must lie in (0,1)");
  if (!(opts.grid_ratio > 1.0))
    throw std::invalid_argument("find_s0: grid_ratio must exceed 1");

  const double s_start = arc_length(spec, kTwoPi);
  if (horizon <= s_start)
    throw std::invalid_argument("find_s0: horizon s=" + std::to_string(horizon) +
                                " does not reach past the first coil (s(2*pi)=" +
                                std::to_string(s_start) + ")");
  const double theta_h = invert_arc_length(spec, horizon);

  std::vector<double> thetas;
  for (double t = kTwoPi; t < theta_h; t *= opts.grid_ratio) thetas.push_back(t);
  thetas.push_back(theta_h);
  if (spec.family == RhoFamily::bump && opts.bump_refine > 0) {
    // d(theta) senses rho on [theta-2*pi, theta]: refine the influence band
    const double lo = std::max(kTwoPi, spec.theta1 - 1.0);
    const double hi = std::min(theta_h, spec.theta2 + kTwoPi + 1.0);
    if (hi > lo) {
      const double step = (spec.theta2 - spec.theta1) / opts.bump_refine;
      for (double t = lo; t < hi; t += step) thetas.push_back(t);
    }
  }
  std::sort(thetas.begin(), thetas.end());
  thetas.erase(std::unique(thetas.begin(), thetas.end(),
                           [](double a, double b) { return b - a < 1e-9 * b; }),
               thetas.end());

  std::vector<WindowRow> rows;
  rows.reserve(thetas.size());
  double s_acc = s_start;
  for (std::size_t i = 0; i < thetas.size(); ++i) {
    if (i > 0) s_acc += arc_length_between(spec, thetas[i - 1], thetas[i]);
    const auto chain = curvature_chain(spec, thetas[i]);
    rows.push_back({thetas[i], s_acc, chain.gamma, chain.dgamma_ds, chain.ddgamma_ds2,
                    coil_width(spec, thetas[i])});
  }

  const double cap = 1.0 - margin;
  std::size_t s0_index = 0;
  for (std::size_t i = rows.size(); i-- > 0;) {
    if (rows[i].d * rows[i].gamma > cap) {
      s0_index = i + 1;
      break;
    }
  }
  if (s0_index >= rows.size())
    throw std::runtime_error("find_s0: no s0 below the horizon satisfies d*gamma <= " +
                             std::to_string(cap));

  std::vector<std::string> notes;
  if (rows.size() - s0_index >= 3) {
    const WindowRow& mid = rows[s0_index + (rows.size() - s0_index) / 2];
    const WindowRow& last = rows.back();
    const double q = std::log((last.d * last.gamma) / (mid.d * mid.gamma)) /
                     std::log(last.s / mid.s);
    notes.push_back("tail extrapolation: d*gamma ~ s^" + std::to_string(q) +
                    " (expected -1/2); d*gamma(horizon)=" +
                    std::to_string(last.d * last.gamma) + " <= " + std::to_string(cap) +
                    (q < 0.0 ? ", decays beyond horizon" : ", WARNING: not decaying"));
  }

  return GeometryWindow(spec, horizon, margin, std::move(rows), s0_index, std::move(notes));
}

}  // namespace spiralbound
