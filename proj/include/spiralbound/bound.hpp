#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "spiralbound/constants.hpp"
#include "spiralbound/omega2.hpp"
#include "spiralbound/potential.hpp"
#include "spiralbound/quadrature.hpp"
#include "spiralbound/window.hpp"

namespace spiralbound {

/// What to do when the positive part of the integrand persists at the horizon.
/// The pure and bump families genuinely have an integrable positive tail
/// (W~ + Lambda - (pi/d)^2 ~ +pi/(2 a0^2 theta^3)), so the default integrates
/// to the horizon and adds a fitted power-law tail estimate. `require_compact`
/// turns that situation into a hard error instead.
enum class TailPolicy { asymptotic, truncate, require_compact };

struct BoundParams {
  double sigma = 1.5;
  double threshold = std::numeric_limits<double>::quiet_NaN();  // default 1/(4 a0^2)
  double r_factor = std::numeric_limits<double>::quiet_NaN();   // default 1 or 2
  double quad_rel_tol = 1e-8;
  TailPolicy tail_cut = TailPolicy::asymptotic;
};

struct BoundResult {
  double integral_term = 0.0;
  double omega2_term = 0.0;
  double total = 0.0;
  double quad_error_estimate = 0.0;
  double s_star = std::numeric_limits<double>::quiet_NaN();
  double tail_estimate = 0.0;       // included in integral_term
  bool positive_at_horizon = false;
};

namespace detail {

inline BoundParams resolve_params(const GeometryWindow& w, BoundParams p) {
  if (std::isnan(p.threshold)) p.threshold = 1.0 / (4.0 * w.a0() * w.a0());
  if (!(p.threshold > 0.0)) throw std::invalid_argument("BoundParams: threshold must be > 0");
  if (std::isnan(p.r_factor)) p.r_factor = (p.sigma >= 1.5) ? 1.0 : 2.0;
  if (!(p.quad_rel_tol > 0.0))
    throw std::invalid_argument("BoundParams: quad_rel_tol must be > 0");
  return p;
}

inline double phi_gap(double weff, double lambda, double d) {
  const double mode = kPi / d;
  return weff + lambda - mode * mode;
}

struct IntegrandEval {
  double phi;
  double value;  // prefactor * sqrt(W~+Lambda) * (phi)_+^(sigma+1/2) * d
};

inline IntegrandEval eval_integrand(const GeometryWindow& w, const BoundParams& p,
                                    double prefactor, double s) {
  const CurvatureData c = curvature_in_s(w, s);
  const double d = coil_width_at(w, s);
  const double weff = potential_effective_from(c, d);
  const double phi = phi_gap(weff, p.threshold, d);
  if (phi <= 0.0) return {phi, 0.0};
  return {phi, prefactor * std::sqrt(weff + p.threshold) * std::pow(phi, p.sigma + 0.5) * d};
}

inline double phi_from_row(const WindowRow& r, double lambda) {
  const CurvatureData c{r.s, r.gamma, r.dgamma_ds, r.ddgamma_ds2};
  return phi_gap(potential_effective_from(c, r.d), lambda, r.d);
}

// refine a sign change of phi(s) inside [lo, hi]
template <class Phi>
inline double bisect_sign_change(Phi&& phi, double lo, double hi, double phi_lo) {
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double pm = phi(mid);
    if ((pm > 0.0) == (phi_lo > 0.0)) lo = mid; else hi = mid;
    if (hi - lo <= 1e-12 * hi) break;
  }
  return 0.5 * (lo + hi);
}

inline BoundResult evaluate_bound(const GeometryWindow& w, const BoundParams& params,
                                  double prefactor, double omega2_term) {
  BoundResult out;
  out.omega2_term = omega2_term;

  auto rows = w.admissible_rows();
  const double lambda = params.threshold;
  auto phi_at = [&](double s) {
    const CurvatureData c = curvature_in_s(w, s);
    const double d = coil_width_at(w, s);
    return phi_gap(potential_effective_from(c, d), lambda, d);
  };
  auto g_at = [&](double s) { return eval_integrand(w, params, prefactor, s).value; };

  // locate the sign structure of phi on the sampled grid, refine the edges
  std::vector<double> phis(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) phis[i] = phi_from_row(rows[i], lambda);

  struct Segment { double a, b; };
  std::vector<Segment> positive;
  double seg_start = std::numeric_limits<double>::quiet_NaN();
  if (phis.front() > 0.0) seg_start = rows.front().s;
  for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
    if ((phis[i] > 0.0) == (phis[i + 1] > 0.0)) continue;
    const double edge = bisect_sign_change(phi_at, rows[i].s, rows[i + 1].s, phis[i]);
    if (phis[i] > 0.0) {
      positive.push_back({seg_start, edge});
      out.s_star = edge;
      seg_start = std::numeric_limits<double>::quiet_NaN();
    } else {
      seg_start = edge;
    }
  }
  out.positive_at_horizon = phis.back() > 0.0;
  if (out.positive_at_horizon) {
    positive.push_back({seg_start, rows.back().s});
    out.s_star = rows.back().s;
  }

  double integral = 0.0, err = 0.0;
  for (const Segment& seg : positive) {
    const auto q = quadrature::integrate(g_at, seg.a, seg.b, 0.5 * params.quad_rel_tol);
    if (!q.converged)
      throw std::runtime_error("bound: quadrature failed on [" + std::to_string(q.worst_a) +
                               ", " + std::to_string(q.worst_b) + "]");
    integral += q.value;
    err += q.error;
  }

  if (out.positive_at_horizon) {
    switch (params.tail_cut) {
      case TailPolicy::require_compact:
        throw std::runtime_error(
            "bound: support not localized (integrand positive at the horizon s=" +
            std::to_string(rows.back().s) + ")");
      case TailPolicy::truncate:
        break;
      case TailPolicy::asymptotic: {
        const double s2 = rows.back().s;
        const double s1 = s2 / 1.35;
        const double g2 = g_at(s2), g1 = g_at(s1);
        double q;
        if (g1 > 0.0 && g2 > 0.0 && g1 > g2) {
          q = std::log(g1 / g2) / std::log(s2 / s1);
        } else {
          q = 1.5 * (params.sigma + 0.5);  // decay implied by phi ~ s^(-3/2)
        }
        if (q <= 1.05)
          throw std::runtime_error(
              "bound: support not localized (tail decay s^-" + std::to_string(q) +
              " too slow to certify at the horizon)");
        out.tail_estimate = g2 * s2 / (q - 1.0);
        integral += out.tail_estimate;
        err += 0.5 * out.tail_estimate;
        break;
      }
    }
  }

  out.integral_term = integral;
  out.quad_error_estimate = err;
  out.total = out.integral_term + out.omega2_term;
  return out;
}

}  // namespace detail

/// Integrand of the main bound at arc position s (the positive part already
/// applied); exposed for plot emission and diagnostics.
inline double bound_integrand(const GeometryWindow& w, const BoundParams& params, double s) {
  BoundParams p = detail::resolve_params(w, params);
  const double pref = (p.sigma >= 1.5 ? 1.0 : p.r_factor) * 2.0 * lt_constant_1(p.sigma) / kPi;
  return detail::eval_integrand(w, p, pref, s).value;
}

/// Eigenvalue-moment bound for sigma >= 3/2:
///   (2 L1/pi) * int_s0^inf sqrt(W~+Lambda) (W~+Lambda-(pi/d)^2)_+^(sigma+1/2) d(s) ds
///   + 2 L2 vol(Omega2) Lambda^(sigma+1),
/// the volume term reducing to L2 vol / (4^(sigma+1/2) a0^(2 sigma+2)) at the
/// default Lambda = 1/(4 a0^2).
inline BoundResult bound_main(const GeometryWindow& w, BoundParams params) {
  if (!(params.sigma >= 1.5))
    throw std::invalid_argument("bound_main: sigma must be >= 3/2 (use bound_low_sigma)");
  BoundParams p = detail::resolve_params(w, params);
  if (p.r_factor != 1.0)
    throw std::invalid_argument("bound_main: r_factor must be 1 for sigma >= 3/2");
  const double pref = 2.0 * lt_constant_1(p.sigma) / kPi;
  const double vol = omega2_volume(w);
  const double omega2_term =
      2.0 * lt_constant_2(p.sigma) * vol * std::pow(p.threshold, p.sigma + 1.0);
  return detail::evaluate_bound(w, p, pref, omega2_term);
}

/// Variant for 1/2 <= sigma < 3/2: prefactor r(sigma,1) * L1 in the integral
/// term and (sigma/(sigma+1))^sigma * L2 * vol / (4^sigma a0^(2 sigma+2)) in
/// the volume term.
inline BoundResult bound_low_sigma(const GeometryWindow& w, BoundParams params) {
  if (!(params.sigma >= 0.5 && params.sigma < 1.5))
    throw std::invalid_argument("bound_low_sigma: sigma must lie in [1/2, 3/2)");
  BoundParams p = detail::resolve_params(w, params);
  if (!(p.r_factor > 0.0 && p.r_factor <= 2.0))
    throw std::invalid_argument("bound_low_sigma: r_factor must lie in (0, 2]");
  const double pref = 2.0 * p.r_factor * lt_constant_1(p.sigma) / kPi;
  const double vol = omega2_volume(w);
  const double omega2_term = 4.0 *
                             std::pow(p.sigma / (p.sigma + 1.0), p.sigma) *
                             lt_constant_2(p.sigma) * vol *
                             std::pow(p.threshold, p.sigma + 1.0);
  return detail::evaluate_bound(w, p, pref, omega2_term);
}

}  // namespace spiralbound
