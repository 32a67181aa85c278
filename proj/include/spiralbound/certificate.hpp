#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "spiralbound/arclength.hpp"
#include "spiralbound/bound.hpp"
#include "spiralbound/potential.hpp"
#include "spiralbound/window.hpp"

namespace spiralbound {

enum class CertificateVerdict { certified_absent_beyond_s0, inconclusive_marginal, violated };

inline const char* to_string(CertificateVerdict v) {
  switch (v) {
    case CertificateVerdict::certified_absent_beyond_s0: return "certified_absent_beyond_s0";
    case CertificateVerdict::inconclusive_marginal: return "inconclusive_marginal";
    case CertificateVerdict::violated: return "violated";
  }
  return "?";
}

/// Outcome of the pointwise check 2 pi a0 - d(s) >= alpha * W~(s) on
/// [s0, horizon] plus the decay-rate comparison of the two sides.
struct CertificateReport {
  CertificateVerdict verdict = CertificateVerdict::inconclusive_marginal;
  double alpha = 0.0;
  double worst_margin = 0.0;      // min over sampled s of (2 pi a0 - d) - alpha W~
  double worst_s = 0.0;
  double worst_rel_margin = 0.0;  // worst margin relative to max(|lhs|, |rhs|)
  double rel_tol = 0.1;
  std::string note;
};

struct CertificateSample {
  double theta;
  double s;
  double lhs;  // 2 pi a0 - d(s)
  double rhs;  // alpha * W~(s)
};

/// alpha = 4 a0^2 * inf over sampled z >= s0 of d(z)^2 / (2 pi a0 + d(z)).
/// The analytic d -> 2 pi a0 limit of the infimum is 4 pi a0^3.
inline double certificate_alpha(const GeometryWindow& w) {
  const double a0 = w.a0();
  double inf = std::numeric_limits<double>::infinity();
  for (const WindowRow& r : w.admissible_rows())
    inf = std::min(inf, r.d * r.d / (kTwoPi * a0 + r.d));
  return 4.0 * a0 * a0 * inf;
}

inline std::vector<CertificateSample> certificate_margins(const GeometryWindow& w,
                                                          double alpha) {
  std::vector<CertificateSample> out;
  const double a0 = w.a0();
  out.reserve(w.admissible_rows().size());
  for (const WindowRow& r : w.admissible_rows()) {
    const CurvatureData c{r.s, r.gamma, r.dgamma_ds, r.ddgamma_ds2};
    out.push_back({r.theta, r.s, kTwoPi * a0 - r.d, alpha * potential_effective_from(c, r.d)});
  }
  return out;
}

/// Three-valued no-discrete-spectrum certificate. The pointwise inequality is
/// asymptotic in nature; margins within `rel_tol` of zero (relative to the
/// size of the two sides) with tied decay rates give the marginal verdict.
/// For the power-tail family the left side decays like theta^-p with p < 2
/// against theta^-2 on the right, so a clean pointwise pass certifies.
inline CertificateReport no_discrete_spectrum_certificate(const GeometryWindow& w,
                                                          double rel_tol = 0.1) {
  if (!(rel_tol > 0.0 && rel_tol < 1.0))
    throw std::invalid_argument("certificate: rel_tol must lie in (0,1)");
  CertificateReport rep;
  rep.rel_tol = rel_tol;
  rep.alpha = certificate_alpha(w);

  const auto samples = certificate_margins(w, rep.alpha);
  rep.worst_margin = std::numeric_limits<double>::infinity();
  rep.worst_rel_margin = std::numeric_limits<double>::infinity();
  for (const CertificateSample& smp : samples) {
    const double margin = smp.lhs - smp.rhs;
    const double rel =
        margin / std::max({std::abs(smp.lhs), std::abs(smp.rhs), 1e-300});
    if (margin < rep.worst_margin) {
      rep.worst_margin = margin;
      rep.worst_s = smp.s;
    }
    rep.worst_rel_margin = std::min(rep.worst_rel_margin, rel);
  }

  const bool decay_favors_left = w.spec().family == RhoFamily::power_tail;
  if (rep.worst_rel_margin < -rel_tol) {
    rep.verdict = CertificateVerdict::violated;
    rep.note = "pointwise inequality fails beyond tolerance at s=" +
               std::to_string(rep.worst_s);
  } else if (rep.worst_margin >= 0.0 && decay_favors_left) {
    rep.verdict = CertificateVerdict::certified_absent_beyond_s0;
    rep.note = "nonnegative margins on [s0, horizon]; left side decays like theta^-" +
               std::to_string(w.spec().p) + " against theta^-2";
  } else {
    rep.verdict = CertificateVerdict::inconclusive_marginal;
    rep.note = decay_favors_left
                   ? "margins dip below zero within tolerance"
                   : "decay rates tie at theta^-2 (leading coefficients coincide)";
  }
  return rep;
}

struct TailReport {
  bool finite = false;
  double tail_estimate = 0.0;  // integral of (d - 2 pi a0)_+^(sigma+1/2) over [s0, horizon]
  std::string note;
};

/// Integrability check of (d(s) - 2 pi a0)_+^(sigma+1/2) on [s0, infinity).
/// Certifies a zero tail when the excess vanishes from some sampled point on;
/// errors with "undetermined" when the excess persists at the horizon.
inline TailReport tail_integrability(const GeometryWindow& w, double sigma) {
  if (!(sigma >= 0.5)) throw std::invalid_argument("tail_integrability: sigma must be >= 1/2");
  TailReport rep;
  const double a0 = w.a0();
  const double cap = kTwoPi * a0;
  auto rows = w.admissible_rows();

  if (rows.back().d > cap)
    throw std::runtime_error(
        "tail_integrability: undetermined (coil-width excess persists at the horizon)");

  // bracket the sampled support of the excess
  std::size_t first = rows.size(), last = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].d > cap) {
      first = std::min(first, i);
      last = i;
    }
  }
  rep.finite = true;
  if (first == rows.size()) {
    rep.tail_estimate = 0.0;
    rep.note = "d(s) <= 2 pi a0 on every sample";
    if (sigma == 0.5 && w.spec().family == RhoFamily::bump)
      rep.note += "; bound integrand decays like s^-3/2 beyond the perturbation";
    return rep;
  }

  const double lo = rows[first == 0 ? 0 : first - 1].s;
  const double hi = rows[std::min(last + 1, rows.size() - 1)].s;
  auto excess = [&](double s) {
    const double e = coil_width_at(w, s) - cap;
    return e > 0.0 ? std::pow(e, sigma + 0.5) : 0.0;
  };
  rep.tail_estimate =
      quadrature::integrate_or_throw(excess, lo, hi, 1e-8, "tail_integrability");
  rep.note = "excess supported inside s in [" + std::to_string(lo) + ", " +
             std::to_string(hi) + "], zero tail beyond";
  return rep;
}

/// Residuals of the large-theta laws for Archimedean-outside-a-compact-set
/// spirals: the five-term expansion of (pi/d)^2 (scaled by theta^6), and the
/// curvature / arc-length / potential asymptotics.
struct DiagnosticsRow {
  double theta;
  double s;
  double theta6_d_residual;     // theta^6 * ((pi/d)^2 - five-term expansion)
  double curvature_residual;    // gamma(theta) * a0 * theta - 1
  double arclength_residual;    // 2 s / (a0 theta^2) - 1
  double potential_residual;    // 8 a0 s W~(s) - 1
};

inline double pi_over_d_sq_expansion(double a0, double theta) {
  const double t2 = theta * theta;
  return (0.25 + 0.25 / t2 + kPi / (2.0 * theta * t2) + kPi * kPi / (t2 * t2) +
          kPi * (4.0 * kPi * kPi - 1.0) / (4.0 * t2 * t2 * theta)) /
         (a0 * a0);
}

inline std::vector<DiagnosticsRow> asymptotic_diagnostics(const GeometryWindow& w,
                                                          int n = 48) {
  if (w.spec().family == RhoFamily::power_tail)
    throw std::invalid_argument(
        "asymptotic_diagnostics: requires a spiral that is Archimedean outside a compact set");
  const double a0 = w.a0();
  const double t_lo = std::max(10.0, w.rows().front().theta);
  const double t_hi = w.rows().back().theta;
  if (!(t_hi > t_lo))
    throw std::invalid_argument("asymptotic_diagnostics: window ends before theta=10");

  std::vector<DiagnosticsRow> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) {
    const double theta = t_lo * std::pow(t_hi / t_lo, double(i) / (n - 1));
    const double s = arc_length(w.spec(), theta);
    const double d = coil_width(w.spec(), theta);
    const auto chain = curvature_chain(w.spec(), theta);
    const CurvatureData c{s, chain.gamma, chain.dgamma_ds, chain.ddgamma_ds2};
    const double weff = potential_effective_from(c, d);
    const double mode = kPi / d;
    const double t6 = std::pow(theta, 6.0);
    out.push_back({theta, s,
                   t6 * (mode * mode - pi_over_d_sq_expansion(a0, theta)),
                   chain.gamma * a0 * theta - 1.0,
                   2.0 * s / (a0 * theta * theta) - 1.0,
                   8.0 * a0 * s * weff - 1.0});
  }
  return out;
}

}  // namespace spiralbound
