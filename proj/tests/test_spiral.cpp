#include <catch_amalgamated.hpp>

#include "oracles.hpp"
#include "spiralbound/spiral.hpp"

using namespace spiralbound;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("radial profile of the built-in families") {
  SECTION("pure") {
    const auto spec = SpiralSpec::pure(1.0);
    const auto rp = radial_profile(spec, 3.0);
    CHECK(rp.r == 3.0);
    CHECK(rp.rdot == 1.0);
    CHECK(rp.rddot == 0.0);
  }
  SECTION("power tail at theta = 0") {
    const auto spec = SpiralSpec::power_tail(1.0, 0.5, 1.5);
    const auto rp = radial_profile(spec, 0.0);
    CHECK_THAT(rp.r, WithinAbs(1.0, 1e-14));      // rho(0) = c/(p-1)
    CHECK_THAT(rp.rdot, WithinAbs(0.5, 1e-14));   // 1 + rho'(0) = 1 - c
    CHECK_THAT(rp.rddot, WithinAbs(0.75, 1e-14)); // c*p
  }
  SECTION("bump vanishes outside its support") {
    const auto spec = SpiralSpec::bump(1.0, 0.3, 10.0, 12.0);
    const auto rp = radial_profile(spec, 5.0);
    CHECK(rp.r == 5.0);
    CHECK(rp.rdot == 1.0);
    CHECK(rp.rddot == 0.0);
  }
  SECTION("analytic rho derivatives agree with central differences") {
    const auto check = [](const SpiralSpec& spec, double t) {
      const double h = 1e-5;
      const double d1 = (spec.rho(t + h) - spec.rho(t - h)) / (2 * h);
      const double d2 = (spec.rho(t + h) - 2 * spec.rho(t) + spec.rho(t - h)) / (h * h);
      const double d3 = (spec.ddrho(t + h) - spec.ddrho(t - h)) / (2 * h);
      const double d4 = (spec.ddrho(t + h) - 2 * spec.ddrho(t) + spec.ddrho(t - h)) / (h * h);
      CHECK_THAT(spec.drho(t), WithinAbs(d1, 1e-7));
      CHECK_THAT(spec.ddrho(t), WithinAbs(d2, 1e-4));
      CHECK_THAT(spec.dddrho(t), WithinAbs(d3, 1e-6));
      CHECK_THAT(spec.ddddrho(t), WithinAbs(d4, 1e-3));
    };
    check(SpiralSpec::power_tail(1.0, 0.5, 1.5), 2.7);
    check(SpiralSpec::bump(1.0, 0.5, 10.0, 20.0), 13.3);
  }
  SECTION("monotonicity violations are rejected") {
    CHECK_THROWS_AS(SpiralSpec::power_tail(1.0, 1.5, 1.5), std::invalid_argument);
    CHECK_THROWS_AS(SpiralSpec::power_tail(1.0, 0.5, 2.5), std::invalid_argument);
    CHECK_THROWS_AS(SpiralSpec::bump(1.0, 20.0, 10.0, 12.0), std::invalid_argument);
    CHECK_THROWS_AS(SpiralSpec::pure(-1.0), std::invalid_argument);
    CHECK_THROWS_AS(radial_profile(SpiralSpec::pure(1.0), -0.5), std::domain_error);
  }
}

TEST_CASE("width function") {
  const auto pure = SpiralSpec::pure(1.0);
  CHECK_THAT(width_function(pure, 0.0), WithinRel(1.0, 1e-14));
  CHECK_THAT(width_function(pure, 17.3), WithinRel(1.0, 1e-14));

  // rho decreasing makes a(theta) < a0; the gap closes like theta^-p
  const auto pt = SpiralSpec::power_tail(1.0, 0.5, 1.5);
  const double a100 = width_function(pt, 100.0);
  CHECK(a100 < 1.0);
  CHECK(1.0 - a100 < 1e-3);
  CHECK(1.0 - a100 > 0.0);

  const auto bump = SpiralSpec::bump(1.0, 0.4, 10.0, 12.0);
  CHECK_THAT(width_function(bump, 30.0), WithinRel(1.0, 1e-14));
}

TEST_CASE("curvature in the angular variable") {
  const auto pure = SpiralSpec::pure(1.0);
  CHECK_THAT(curvature_theta(pure, 0.0), WithinAbs(2.0, 1e-14));
  CHECK_THAT(curvature_theta(pure, 10.0), WithinRel(oracles::gamma_pure(1.0, 10.0), 1e-13));
  CHECK_THAT(curvature_theta(pure, 10.0), WithinAbs(0.10049, 1e-5));

  SECTION("gamma * theta -> 1 at large theta") {
    CHECK_THAT(curvature_theta(pure, 1e3) * 1e3, WithinRel(1.0, 5e-3));
  }
  SECTION("matches the closed form across the range") {
    for (double t : {0.5, 1.0, 3.0, 7.7, 42.0, 300.0})
      CHECK_THAT(curvature_theta(pure, t), WithinRel(oracles::gamma_pure(1.0, t), 1e-12));
  }
}

TEST_CASE("curvature derivatives: analytic vs Richardson differences") {
  const auto pure = SpiralSpec::pure(1.0);
  // hand-differentiated closed form as the oracle
  CHECK_THAT(curvature_theta_derivs(pure, 10.0).dtheta,
             WithinRel(oracles::dgamma_pure(1.0, 10.0), 1e-13));
  CHECK_THAT(curvature_theta_derivs(pure, 10.0).ddtheta,
             WithinRel(oracles::ddgamma_pure(1.0, 10.0), 1e-13));
  CHECK_THAT(curvature_dtheta_fd(pure, 10.0),
             WithinAbs(oracles::dgamma_pure(1.0, 10.0), 1e-6));

  for (const auto& spec :
       {SpiralSpec::power_tail(1.0, 0.5, 1.5), SpiralSpec::bump(1.0, 0.5, 10.0, 20.0)}) {
    for (double t : {8.0, 13.5, 26.0}) {
      const auto g = curvature_theta_derivs(spec, t);
      CHECK_THAT(curvature_dtheta_fd(spec, t), WithinAbs(g.dtheta, 1e-6));
      CHECK_THAT(curvature_ddtheta_fd(spec, t), WithinAbs(g.ddtheta, 1e-4));
    }
  }
}

TEST_CASE("fermi map") {
  const auto pure = SpiralSpec::pure(1.0);
  SECTION("u = 0 lands on the curve") {
    for (double t : {0.3, kPi / 2, 4.0, 25.0}) {
      const auto x = fermi_map(pure, t, 0.0);
      const double r = radial_profile(pure, t).r;
      CHECK_THAT(x[0], WithinAbs(r * std::cos(t), 1e-13 * (1 + r)));
      CHECK_THAT(x[1], WithinAbs(r * std::sin(t), 1e-13 * (1 + r)));
    }
    const auto x = fermi_map(pure, kPi / 2, 0.0);
    CHECK_THAT(x[0], WithinAbs(0.0, 1e-14));
    CHECK_THAT(x[1], WithinAbs(kPi / 2, 1e-14));
  }
  SECTION("the normal has unit speed in u") {
    const auto pt = SpiralSpec::power_tail(1.0, 0.5, 1.5);
    for (double t : {1.0, 9.2, 31.0})
      for (double u : {-2.0, 0.7, 3.0}) {
        const auto a = fermi_map(pt, t, u);
        const auto b = fermi_map(pt, t, 0.0);
        CHECK_THAT(std::hypot(a[0] - b[0], a[1] - b[1]), WithinRel(std::abs(u), 1e-12));
      }
  }
  SECTION("curve speed matches the arc-length integrand") {
    // |d/dtheta fermi(theta,0)| = sqrt(r'^2 + r^2) to 1e-6 relative
    const auto bump = SpiralSpec::bump(1.0, 0.5, 10.0, 20.0);
    const double h = 1e-6;
    for (double t : {2.0, 12.0, 18.5, 40.0}) {
      const auto a = fermi_map(bump, t + h, 0.0);
      const auto b = fermi_map(bump, t - h, 0.0);
      const double speed = std::hypot(a[0] - b[0], a[1] - b[1]) / (2 * h);
      CHECK_THAT(speed, WithinRel(arc_speed(bump, t), 1e-6));
    }
  }
}
