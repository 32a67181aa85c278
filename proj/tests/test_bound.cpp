#include <catch_amalgamated.hpp>

#include "oracles.hpp"
#include "spiralbound/bound.hpp"
#include "spiralbound/quadrature.hpp"

using namespace spiralbound;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("semiclassical constants") {
  // Gamma(3/2) = sqrt(pi)/2, Gamma(2) = 1 -> 1/4;
  // Gamma(5/2) = 3 sqrt(pi)/4, Gamma(3) = 2 -> 3/16
  CHECK_THAT(lt_constant_1(0.5), WithinAbs(0.25, 1e-13));
  CHECK_THAT(lt_constant_1(1.5), WithinAbs(0.1875, 1e-13));
  CHECK_THAT(lt_constant_2(1.0), WithinAbs(1.0 / (8.0 * kPi), 1e-15));
  CHECK_THAT(lt_constant_2(0.0), WithinAbs(1.0 / (4.0 * kPi), 1e-15));

  SECTION("monotone decreasing on [1/2, 4]") {
    double prev = 1e9;
    for (double s = 0.5; s <= 4.0; s += 0.125) {
      const double v = lt_constant_1(s);
      CHECK(v < prev);
      prev = v;
    }
  }
  SECTION("Gamma-function identity for the 2d constant") {
    for (double s : {0.5, 1.0, 1.5, 2.0}) {
      const double via_gamma = std::tgamma(s + 1.0) / (4.0 * kPi * std::tgamma(s + 2.0));
      CHECK_THAT(lt_constant_2(s), WithinAbs(via_gamma, 1e-14));
    }
  }
  CHECK_THROWS_AS(lt_constant_1(-0.5), std::invalid_argument);
}

TEST_CASE("omega2 volume") {
  const auto pure = SpiralSpec::pure(1.0);

  SECTION("polar sector plus segment triangle oracle at theta0 = 4 pi") {
    const double theta0 = 4.0 * kPi;
    const auto cross = coil_crossing(pure, theta0);
    const double sector = quadrature::integrate_or_throw(
        [&](double t) {
          const double r = radial_profile(pure, t).r;
          return 0.5 * r * r;
        },
        cross.tau, theta0, 1e-12, "sector");
    const double r0 = radial_profile(pure, theta0).r;
    const double px = r0 * std::cos(theta0), py = r0 * std::sin(theta0);
    const auto q = fermi_map(pure, theta0, cross.d);
    const double expected = sector + 0.5 * (px * q[1] - py * q[0]);

    const double area = omega2_volume_at(pure, theta0);
    CHECK_THAT(area, WithinRel(expected, 1e-7));

    // grid point-counting oracle, ~1e6 cells across the bounding box
    std::vector<double> xs, ys;
    for (int i = 0; i < 4096; ++i) {
      const double t = cross.tau + (theta0 - cross.tau) * i / 4095.0;
      const double r = radial_profile(pure, t).r;
      xs.push_back(r * std::cos(t));
      ys.push_back(r * std::sin(t));
    }
    const double counted = oracles::polygon_area_by_grid(xs, ys, 2.0 * theta0 / 1000.0);
    CHECK_THAT(area, WithinRel(counted, 5e-3));
  }
  SECTION("homothety scales the area by a0^2") {
    const double a1 = omega2_volume_at(SpiralSpec::pure(1.0), 4.0 * kPi);
    const double a2 = omega2_volume_at(SpiralSpec::pure(2.0), 4.0 * kPi);
    CHECK_THAT(a2, WithinRel(4.0 * a1, 1e-9));
  }
  SECTION("grows with theta0") {
    double prev = 0.0;
    for (double t0 : {2.2 * kPi, 3.0 * kPi, 4.0 * kPi, 6.0 * kPi}) {
      const double a = omega2_volume_at(pure, t0);
      CHECK(a > prev);
      prev = a;
    }
  }
}

namespace {
const GeometryWindow& pure_w() {
  static GeometryWindow w = find_s0(SpiralSpec::pure(1.0), 5000.0, 0.1);
  return w;
}
}  // namespace

TEST_CASE("main bound on the pure family") {
  const auto& w = pure_w();
  BoundParams p;
  p.sigma = 1.5;
  const BoundResult b = bound_main(w, p);

  SECTION("terms are nonnegative and additive") {
    CHECK(b.integral_term >= 0.0);
    CHECK(b.omega2_term > 0.0);
    CHECK_THAT(b.total, WithinRel(b.integral_term + b.omega2_term, 1e-15));
  }
  SECTION("the positive part persists to the horizon") {
    // W~ + Lambda - (pi/d)^2 = + pi/(2 theta^3) + O(theta^-4) > 0 for the
    // pure spiral: the (1 - gamma d)^-2 factor in W~ outweighs the d-defect
    CHECK(b.positive_at_horizon);
    CHECK(b.integral_term > 0.0);
    CHECK(b.tail_estimate > 0.0);
    CHECK(b.tail_estimate < 1e-6 * b.integral_term);  // horizon-dominated
    CHECK(b.s_star == w.rows().back().s);
  }
  SECTION("volume term matches the closed form at the default threshold") {
    const double vol = omega2_volume(w);
    CHECK_THAT(b.omega2_term,
               WithinRel(lt_constant_2(1.5) * vol / (std::pow(4.0, 2.0) * 1.0), 1e-12));
  }
  SECTION("quadrature error meets the requested tolerance") {
    CHECK(b.quad_error_estimate <= p.quad_rel_tol * b.total);
    BoundParams tight = p;
    tight.quad_rel_tol = 0.5e-8;
    const BoundResult b2 = bound_main(w, tight);
    CHECK(std::abs(b2.total - b.total) <= b.quad_error_estimate);
  }
  SECTION("require_compact policy reports the unlocalized support") {
    BoundParams rc = p;
    rc.tail_cut = TailPolicy::require_compact;
    CHECK_THROWS_WITH(bound_main(w, rc),
                      Catch::Matchers::ContainsSubstring("support not localized"));
  }
  SECTION("sigma dispatch is enforced") {
    BoundParams low = p;
    low.sigma = 1.0;
    CHECK_THROWS_AS(bound_main(w, low), std::invalid_argument);
    BoundParams high = p;
    high.sigma = 1.5;
    CHECK_THROWS_AS(bound_low_sigma(w, high), std::invalid_argument);
  }
}

TEST_CASE("the power-tail integrand has compact support") {
  const GeometryWindow w = find_s0(SpiralSpec::power_tail(1.0, 0.5, 1.5), 5000.0, 0.1);
  BoundParams p;
  p.sigma = 1.5;
  const BoundResult b = bound_main(w, p);
  CHECK_FALSE(b.positive_at_horizon);
  CHECK(b.tail_estimate == 0.0);
  CHECK(b.integral_term > 0.0);
  // the sign change sits near theta = 9.5, i.e. s ~ 45
  CHECK(b.s_star > 30.0);
  CHECK(b.s_star < 60.0);
  // certified-zero tail: same result under require_compact
  BoundParams rc = p;
  rc.tail_cut = TailPolicy::require_compact;
  const BoundResult b2 = bound_main(w, rc);
  CHECK_THAT(b2.total, WithinRel(b.total, 1e-12));
}

TEST_CASE("bump bound exceeds and localizes around the widened coil") {
  const GeometryWindow w = find_s0(SpiralSpec::bump(1.0, 0.5, 10.0, 20.0), 5000.0, 0.1);
  BoundParams p;
  p.sigma = 1.5;
  const BoundResult b = bound_main(w, p);
  CHECK(b.integral_term > 0.0);
  // integrand positive on the widened coil: s(theta in [10, 20+2pi]) ~ [50, 350]
  const double g_mid = bound_integrand(w, p, 150.0);
  CHECK(g_mid > 0.0);
  const BoundResult b_pure = bound_main(pure_w(), p);
  CHECK(b.total > b_pure.total);
}

TEST_CASE("low-sigma variant") {
  const auto& w = pure_w();

  SECTION("prefactor r(1/2,1) * L1 = 2 * 1/4") {
    BoundParams p;
    p.sigma = 0.5;
    const BoundResult b = bound_low_sigma(w, p);  // r defaults to 2
    BoundParams p1 = p;
    p1.r_factor = 1.0;
    const BoundResult b1 = bound_low_sigma(w, p1);
    CHECK_THAT(b.integral_term, WithinRel(2.0 * b1.integral_term, 1e-9));
  }
  SECTION("volume prefactor at sigma = 1 is (1/2) L2 = 1/(16 pi)") {
    BoundParams p;
    p.sigma = 1.0;
    const BoundResult b = bound_low_sigma(w, p);
    const double vol = omega2_volume(w);
    CHECK_THAT(b.omega2_term, WithinRel(vol / (16.0 * kPi) / 4.0, 1e-12));
  }
  SECTION("meets the main bound at sigma -> 3/2 with r = 1") {
    BoundParams lo;
    lo.sigma = 1.5 - 1e-9;
    lo.r_factor = 1.0;
    BoundParams hi;
    hi.sigma = 1.5;
    CHECK_THAT(bound_low_sigma(w, lo).integral_term,
               WithinRel(bound_main(w, hi).integral_term, 1e-6));
  }
  SECTION("r_factor range enforced") {
    BoundParams p;
    p.sigma = 1.0;
    p.r_factor = 2.5;
    CHECK_THROWS_AS(bound_low_sigma(w, p), std::invalid_argument);
  }
}

TEST_CASE("bound scaling under homothety") {
  // lengths scale by lam: total(sigma) scales by lam^(-2 sigma)
  const double lam = 2.0;
  for (double sigma : {1.5, 2.0}) {
    BoundParams p;
    p.sigma = sigma;
    const BoundResult b1 = bound_main(find_s0(SpiralSpec::pure(1.0), 5000.0, 0.1), p);
    const BoundResult b2 = bound_main(find_s0(SpiralSpec::pure(lam), lam * 5000.0, 0.1), p);
    CHECK_THAT(b2.total, WithinRel(b1.total * std::pow(lam, -2.0 * sigma), 1e-6));
  }
}

TEST_CASE("integrand decreases in sigma where the positive part is below one") {
  const auto& w = pure_w();
  BoundParams a;
  a.sigma = 1.5;
  BoundParams b;
  b.sigma = 2.0;
  for (double s : {100.0, 500.0, 3000.0}) {
    // here 0 < phi < 1, so phi^(sigma+1/2) shrinks as sigma grows; the
    // constant prefactor shrinks too
    CHECK(bound_integrand(w, b, s) < bound_integrand(w, a, s));
  }
}
