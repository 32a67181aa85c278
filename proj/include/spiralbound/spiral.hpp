#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace spiralbound {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

enum class RhoFamily { pure, power_tail, bump };

inline const char* to_string(RhoFamily f) {
  switch (f) {
    case RhoFamily::pure: return "pure";
    case RhoFamily::power_tail: return "power_tail";
    case RhoFamily::bump: return "bump";
  }
  return "?";
}

/// Radial profile r(theta) = a0*theta + rho(theta) of a simple spiral whose
/// coil width tends to 2*pi*a0. The perturbation rho is one of three
/// built-in families, each with analytic first and second derivatives:
///   pure        rho == 0
///   power_tail  rho = c/(p-1) * (1+theta)^(1-p), rho' = -c (1+theta)^-p,
///               with c > 0 and 1 < p < 2
///   bump        rho = A * (1-x^2)^3 on [theta1, theta2] (C^2, compactly
///               supported), x the affine map of [theta1,theta2] to [-1,1]
struct SpiralSpec {
  double a0 = 1.0;
  RhoFamily family = RhoFamily::pure;
  double c = 0.0;         // power_tail
  double p = 0.0;         // power_tail
  double amplitude = 0.0; // bump
  double theta1 = 0.0;    // bump
  double theta2 = 0.0;    // bump

  static SpiralSpec pure(double a0) {
    SpiralSpec s;
    s.a0 = a0;
    s.validate();
    return s;
  }
  static SpiralSpec power_tail(double a0, double c, double p) {
    SpiralSpec s;
    s.a0 = a0;
    s.family = RhoFamily::power_tail;
    s.c = c;
    s.p = p;
    s.validate();
    return s;
  }
  static SpiralSpec bump(double a0, double amplitude, double theta1, double theta2) {
    SpiralSpec s;
    s.a0 = a0;
    s.family = RhoFamily::bump;
    s.amplitude = amplitude;
    s.theta1 = theta1;
    s.theta2 = theta2;
    s.validate();
    return s;
  }

  double rho(double t) const {
    switch (family) {
      case RhoFamily::pure: return 0.0;
      case RhoFamily::power_tail:
        return c / (p - 1.0) * std::pow(1.0 + t, 1.0 - p);
      case RhoFamily::bump: {
        const double x = bump_x(t);
        if (std::abs(x) >= 1.0) return 0.0;
        const double q = 1.0 - x * x;
        return amplitude * q * q * q;
      }
    }
    return 0.0;
  }
  double drho(double t) const {
    switch (family) {
      case RhoFamily::pure: return 0.0;
      case RhoFamily::power_tail: return -c * std::pow(1.0 + t, -p);
      case RhoFamily::bump: {
        const double x = bump_x(t);
        if (std::abs(x) >= 1.0) return 0.0;
        const double q = 1.0 - x * x;
        return amplitude * (-6.0 * x * q * q) * bump_slope();
      }
    }
    return 0.0;
  }
  double ddrho(double t) const {
    switch (family) {
      case RhoFamily::pure: return 0.0;
      case RhoFamily::power_tail: return c * p * std::pow(1.0 + t, -p - 1.0);
      case RhoFamily::bump: {
        const double x = bump_x(t);
        if (std::abs(x) >= 1.0) return 0.0;
        const double q = 1.0 - x * x;
        const double k = bump_slope();
        return amplitude * (q * (30.0 * x * x - 6.0)) * k * k;
      }
    }
    return 0.0;
  }
  // third and fourth derivatives feed the analytic curvature derivatives; for
  // the bump they exist piecewise (jumps at the support edges only)
  double dddrho(double t) const {
    switch (family) {
      case RhoFamily::pure: return 0.0;
      case RhoFamily::power_tail: return -c * p * (p + 1.0) * std::pow(1.0 + t, -p - 2.0);
      case RhoFamily::bump: {
        const double x = bump_x(t);
        if (std::abs(x) >= 1.0) return 0.0;
        const double k = bump_slope();
        return amplitude * (-120.0 * x * x * x + 72.0 * x) * k * k * k;
      }
    }
    return 0.0;
  }
  double ddddrho(double t) const {
    switch (family) {
      case RhoFamily::pure: return 0.0;
      case RhoFamily::power_tail:
        return c * p * (p + 1.0) * (p + 2.0) * std::pow(1.0 + t, -p - 3.0);
      case RhoFamily::bump: {
        const double x = bump_x(t);
        if (std::abs(x) >= 1.0) return 0.0;
        const double k = bump_slope();
        const double k2 = k * k;
        return amplitude * (-360.0 * x * x + 72.0) * k2 * k2;
      }
    }
    return 0.0;
  }

  /// sup over tau of |rho(tau + 2*pi) - rho(tau)|; bounds how far the coil
  /// width can deviate from 2*pi*a0.
  double rho_gap_sup() const {
    switch (family) {
      case RhoFamily::pure: return 0.0;
      case RhoFamily::power_tail:
        // rho decreasing and convex: the largest decrement sits at tau = 0.
        return rho(0.0) - rho(kTwoPi);
      case RhoFamily::bump: return std::abs(amplitude);
    }
    return 0.0;
  }

  void validate() const {
    if (!(a0 > 0.0)) throw std::invalid_argument("SpiralSpec: a0 must be positive");
    switch (family) {
      case RhoFamily::pure: break;
      case RhoFamily::power_tail:
        if (!(c > 0.0)) throw std::invalid_argument("SpiralSpec: power_tail needs c > 0");
        if (!(p > 1.0 && p < 2.0))
          throw std::invalid_argument("SpiralSpec: power_tail needs 1 < p < 2");
        if (!(a0 - c > 0.0))
          throw std::invalid_argument(
              "SpiralSpec: power_tail with c >= a0 is not strictly increasing at theta=0");
        break;
      case RhoFamily::bump: {
        if (!(theta2 > theta1) || theta1 < 0.0)
          throw std::invalid_argument("SpiralSpec: bump needs 0 <= theta1 < theta2");
        // max |d/dx (1-x^2)^3| = 96/(25*sqrt(5)) attained at x = 1/sqrt(5)
        const double max_fprime = 96.0 / (25.0 * std::sqrt(5.0));
        if (!(a0 - std::abs(amplitude) * max_fprime * bump_slope() > 0.0))
          throw std::invalid_argument(
              "SpiralSpec: bump amplitude violates monotonicity of r(theta)");
        break;
      }
    }
  }

 private:
  double bump_x(double t) const { return (2.0 * t - theta1 - theta2) / (theta2 - theta1); }
  double bump_slope() const { return 2.0 / (theta2 - theta1); }
};

struct RadialProfile {
  double r;
  double rdot;
  double rddot;
};

/// r, dr/dtheta, d2r/dtheta2 at theta >= 0. Rejects points where the profile
/// stops being strictly increasing.
inline RadialProfile radial_profile(const SpiralSpec& spec, double theta) {
  if (!(theta >= 0.0))
    throw std::domain_error("radial_profile: theta must be >= 0");
  RadialProfile out{spec.a0 * theta + spec.rho(theta), spec.a0 + spec.drho(theta),
                    spec.ddrho(theta)};
  if (!(out.rdot > 0.0))
    throw std::domain_error("radial_profile: a0 + rho'(theta) <= 0 at theta=" +
                            std::to_string(theta) + " (monotonicity violated)");
  return out;
}

/// Normalized radial gap between successive coils,
/// a(theta) = (r(theta+2*pi) - r(theta)) / (2*pi).
inline double width_function(const SpiralSpec& spec, double theta) {
  const double a =
      (radial_profile(spec, theta + kTwoPi).r - radial_profile(spec, theta).r) / kTwoPi;
  if (!(a > 0.0))
    throw std::runtime_error("width_function: nonpositive width at theta=" +
                             std::to_string(theta) + " (self-intersecting spec)");
  return a;
}

/// Signed curvature gamma(theta) = (r^2 + 2 r'^2 - r r'') / (r^2 + r'^2)^(3/2).
inline double curvature_theta(const SpiralSpec& spec, double theta) {
  const auto [r, rd, rdd] = radial_profile(spec, theta);
  const double q = r * r + rd * rd;
  if (q <= 0.0)
    throw std::domain_error("curvature_theta: r = r' = 0 (degenerate point)");
  return (r * r + 2.0 * rd * rd - r * rdd) / (q * std::sqrt(q));
}

/// Speed of theta -> curve point: |C'(theta)| = sqrt(r'^2 + r^2); this is the
/// integrand of the arc length.
inline double arc_speed(const SpiralSpec& spec, double theta) {
  const auto rp = radial_profile(spec, theta);
  return std::hypot(rp.rdot, rp.r);
}

inline double arc_speed_derivative(const SpiralSpec& spec, double theta) {
  const auto rp = radial_profile(spec, theta);
  return rp.rdot * (rp.rddot + rp.r) / std::hypot(rp.rdot, rp.r);
}

/// Point at signed distance u along the inward normal of the curve point at
/// theta.
inline std::array<double, 2> fermi_map(const SpiralSpec& spec, double theta, double u) {
  const auto rp = radial_profile(spec, theta);
  const double n = std::hypot(rp.rdot, rp.r);
  const double ct = std::cos(theta), st = std::sin(theta);
  return {rp.r * ct - u / n * (rp.rdot * st + rp.r * ct),
          rp.r * st + u / n * (rp.rdot * ct - rp.r * st)};
}

/// First two theta-derivatives of the curvature by analytic differentiation:
/// gamma = N / D^(3/2) with N = r^2 + 2 r'^2 - r r'', D = r^2 + r'^2.
struct CurvatureDerivs {
  double gamma;
  double dtheta;
  double ddtheta;
};

inline CurvatureDerivs curvature_theta_derivs(const SpiralSpec& spec, double theta) {
  const auto rp = radial_profile(spec, theta);
  const double r = rp.r, r1 = rp.rdot, r2 = rp.rddot;
  const double r3 = spec.dddrho(theta), r4 = spec.ddddrho(theta);
  const double N = r * r + 2.0 * r1 * r1 - r * r2;
  const double D = r * r + r1 * r1;
  if (D <= 0.0)
    throw std::domain_error("curvature_theta_derivs: r = r' = 0 (degenerate point)");
  const double N1 = 2.0 * r * r1 + 3.0 * r1 * r2 - r * r3;
  const double D1 = 2.0 * r1 * (r + r2);
  const double N2 = 2.0 * r1 * r1 + 2.0 * r * r2 + 3.0 * r2 * r2 + 2.0 * r1 * r3 - r * r4;
  const double D2 = 2.0 * (r * r2 + r2 * r2 + r1 * r1 + r1 * r3);
  const double P = N1 * D - 1.5 * N * D1;
  const double P1 = N2 * D - 0.5 * N1 * D1 - 1.5 * N * D2;
  const double D32 = D * std::sqrt(D);
  const double D52 = D32 * D;
  const double D72 = D52 * D;
  return {N / D32, P / D52, (P1 * D - 2.5 * P * D1) / D72};
}

/// d(gamma)/dtheta by Richardson-extrapolated central differences of the
/// analytic gamma(theta); fallback route for profiles without third or
/// fourth derivatives, and the cross-check for the analytic one.
inline double curvature_dtheta_fd(const SpiralSpec& spec, double theta, double h = 1e-4) {
  if (theta < 2.0 * h)
    throw std::domain_error("curvature_dtheta_fd: theta too close to 0 for central differences");
  auto D = [&](double hh) {
    return (curvature_theta(spec, theta + hh) - curvature_theta(spec, theta - hh)) /
           (2.0 * hh);
  };
  return (4.0 * D(0.5 * h) - D(h)) / 3.0;
}

inline double curvature_ddtheta_fd(const SpiralSpec& spec, double theta, double h = 1e-4) {
  if (theta < 2.0 * h)
    throw std::domain_error("curvature_ddtheta_fd: theta too close to 0 for central differences");
  const double g0 = curvature_theta(spec, theta);
  auto S = [&](double hh) {
    return (curvature_theta(spec, theta + hh) - 2.0 * g0 +
            curvature_theta(spec, theta - hh)) /
           (hh * hh);
  };
  return (4.0 * S(0.5 * h) - S(h)) / 3.0;
}

/// gamma, dgamma/ds, d2gamma/ds2 at a given theta via the chain rule
/// dgamma/ds = gamma'(theta)/s'(theta),
/// d2gamma/ds2 = (gamma'' s' - gamma' s'') / s'^3.
struct CurvatureChain {
  double gamma;
  double dgamma_ds;
  double ddgamma_ds2;
};

inline CurvatureChain curvature_chain(const SpiralSpec& spec, double theta) {
  const auto g = curvature_theta_derivs(spec, theta);
  const double sp = arc_speed(spec, theta);
  const double spp = arc_speed_derivative(spec, theta);
  return {g.gamma, g.dtheta / sp, (g.ddtheta * sp - g.dtheta * spp) / (sp * sp * sp)};
}

}  // namespace spiralbound
