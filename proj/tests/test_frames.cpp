#include <cmath>
#include <random>

#include "ares/frames.hpp"
#include "doctest.h"

using namespace ares;

namespace {

PlanetKinematics random_planet(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> Rd(0.8, 1.6), Ld(-6.0, 6.0), rate(-0.2, 0.2);
  PlanetKinematics p;
  p.R = Rd(rng);
  p.L = Ld(rng);
  p.R_dot = 0.1 * rate(rng);
  p.L_dot = 1.0 + rate(rng);
  return p;
}

SpacecraftState random_state(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> rd(1e-3, 0.8), ang(-6.0, 6.0), vd(-1.5, 1.5);
  return {rd(rng), ang(rng), vd(rng), vd(rng)};
}

}  // namespace

TEST_CASE("conversion factors satisfy D = V * T within 1e-15") {
  const auto scales = make_scales(PhysicalConstants::defaults());
  for (const ScaleSet& a : scales)
    for (const ScaleSet& b : scales) {
      const ConversionFactors f = conversion(a, b);
      CHECK(std::abs(f.D_ratio - f.V_ratio * f.T_ratio) <= 1e-15 * std::abs(f.D_ratio));
    }
}

TEST_CASE("scale sets normalize the central gravitational parameter") {
  const PhysicalConstants c = PhysicalConstants::defaults();
  const auto scales = make_scales(c);
  // mu in canonical units: mu / (D V^2) = 1.
  CHECK(c.mu_S / (scales[0].D * scales[0].V * scales[0].V) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(c.mu_E / (scales[1].D * scales[1].V * scales[1].V) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(c.mu_M / (scales[3].D * scales[3].V * scales[3].V) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("round trips reproduce random states to relative 1e-12 over 1e4 samples") {
  std::mt19937_64 rng(123456);
  double worst = 0.0;
  for (int k = 0; k < 10000; ++k) {
    const PlanetKinematics p = random_planet(rng);
    const SpacecraftState s = random_state(rng);
    const HelioState h = planet_to_helio(p, s, s.theta);
    const SpacecraftState back = helio_to_planet(p, h, s.theta);
    const double scale = std::max({1.0, std::abs(s.r), std::abs(s.v_r), std::abs(s.v_theta)});
    worst = std::max(worst, std::abs(back.r - s.r) / scale);
    worst = std::max(worst, std::abs(back.theta - s.theta) / scale);
    worst = std::max(worst, std::abs(back.v_r - s.v_r) / scale);
    worst = std::max(worst, std::abs(back.v_theta - s.v_theta) / scale);
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("forward transform satisfies the scalar position/velocity relations to 1e-12") {
  // Independent check of the Cartesian assembly against the trigonometric
  // relations between (rho, phi, v_rho, v_phi) and (r, theta, v_r, v_theta):
  //   rho cos(theta-phi) = R cos(theta-L) + r
  //   rho sin(theta-phi) = R sin(theta-L)
  //   v_r = -Rdot cos(theta-L) - R Ldot sin(theta-L) + v_rho cos(theta-phi)
  //         + v_phi sin(theta-phi)
  //   v_theta = Rdot sin(theta-L) - R Ldot cos(theta-L) - v_rho sin(theta-phi)
  //         + v_phi cos(theta-phi)
  std::mt19937_64 rng(98765);
  double worst = 0.0;
  for (int k = 0; k < 10000; ++k) {
    const PlanetKinematics p = random_planet(rng);
    const SpacecraftState s = random_state(rng);
    const HelioState h = planet_to_helio(p, s, s.theta);
    const double a = s.theta - p.L, b = s.theta - h.phi;
    const double r1 = h.rho * std::cos(b) - (p.R * std::cos(a) + s.r);
    const double r2 = h.rho * std::sin(b) - p.R * std::sin(a);
    const double r3 = s.v_r - (-p.R_dot * std::cos(a) - p.R * p.L_dot * std::sin(a) +
                               h.v_rho * std::cos(b) + h.v_phi * std::sin(b));
    const double r4 = s.v_theta - (p.R_dot * std::sin(a) - p.R * p.L_dot * std::cos(a) -
                                   h.v_rho * std::sin(b) + h.v_phi * std::cos(b));
    worst = std::max({worst, std::abs(r1), std::abs(r2), std::abs(r3), std::abs(r4)});
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("co-located, co-moving spacecraft inherits the planet state") {
  const PlanetKinematics p{1.2, 0.8, 0.05, 0.9};
  const SpacecraftState s{1e-14, 0.3, 0.0, 0.0};
  const HelioState h = planet_to_helio(p, s, p.L);
  CHECK(h.rho == doctest::Approx(p.R).epsilon(1e-12));
  CHECK(h.phi == doctest::Approx(p.L).epsilon(1e-12));
  CHECK(h.v_rho == doctest::Approx(p.R_dot).epsilon(1e-10).scale(1.0));
  CHECK(h.v_phi == doctest::Approx(p.R * p.L_dot).epsilon(1e-10));
}

TEST_CASE("unwrap_near lands within pi of the hint") {
  CHECK(unwrap_near(0.1, 6.3) == doctest::Approx(0.1 + 2.0 * kPi));
  CHECK(unwrap_near(6.2, 0.0) == doctest::Approx(6.2 - 2.0 * kPi));
  CHECK(unwrap_near(1.0, 1.5) == doctest::Approx(1.0));
}
