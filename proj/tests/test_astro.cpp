#include <cmath>
#include <random>

#include "ares/astro.hpp"
#include "ares/frames.hpp"
#include "ares/propagate.hpp"
#include "doctest.h"

using namespace ares;

TEST_CASE("default constants validate and have the catalogued values") {
  const PhysicalConstants c = PhysicalConstants::defaults();
  c.validate();
  CHECK(c.R_E == doctest::Approx(6.3781e6).epsilon(1e-15));
  CHECK(c.R_M == doctest::Approx(3.3895e6).epsilon(1e-15));
  CHECK(c.R_E_SOI == doctest::Approx(9.2455e8).epsilon(1e-15));
  CHECK(c.R_M_SOI == doctest::Approx(5.7717e8).epsilon(1e-15));
  CHECK(c.R_SE == doctest::Approx(1.4960e11).epsilon(1e-15));
  CHECK(c.R_SM == doctest::Approx(2.2794e11).epsilon(1e-15));
  CHECK(c.mu_E == doctest::Approx(3.9860e14).epsilon(1e-15));
  CHECK(c.mu_S == doctest::Approx(1.3271e20).epsilon(1e-15));
  CHECK(c.mu_M == doctest::Approx(4.2828e13).epsilon(1e-15));
}

TEST_CASE("invalid constants are rejected") {
  PhysicalConstants c = PhysicalConstants::defaults();
  c.mu_S = -1.0;
  CHECK_THROWS(c.validate());
  c = PhysicalConstants::defaults();
  c.R_E_SOI = c.R_SE * 2.0;  // violates R_E_SOI < R_SE
  CHECK_THROWS(c.validate());
}

TEST_CASE("circular planet model: constant radius, constant longitude rate") {
  const PlanetModel m = PlanetModel::make(1.4960e11, 0.0167, deg2rad(102.9), 1.0, 1.4960e11,
                                          /*circular=*/true);
  CHECK(m.e == 0.0);
  CHECK(m.p == doctest::Approx(1.0).epsilon(1e-15));
  for (double L : {0.0, 1.0, 2.5, 6.0}) {
    CHECK(planet_radius(m, L) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(planet_radius_rate(m, L, true_longitude_rate(m, L)) ==
          doctest::Approx(0.0).epsilon(1e-15));
    CHECK(true_longitude_rate(m, L) == doctest::Approx(1.0).epsilon(1e-15));
  }
}

TEST_CASE("elliptic radius at perihelion and aphelion") {
  const double e = 0.0935, varpi = deg2rad(336.0);
  const PlanetModel m = PlanetModel::make(1.0, e, varpi, 1.0, 1.0, false);
  CHECK(planet_radius(m, varpi) == doctest::Approx((1.0 - e * e) / (1.0 + e)).epsilon(1e-14));
  CHECK(planet_radius(m, varpi + kPi) ==
        doctest::Approx((1.0 - e * e) / (1.0 - e)).epsilon(1e-14));
}

TEST_CASE("equinoctial identity 1 + f cosL + g sinL == 1 + e cos(nu) to 1e-12") {
  std::mt19937_64 rng(20260823);
  std::uniform_real_distribution<double> angle(-10.0, 10.0);
  std::uniform_real_distribution<double> ecc(0.0, 0.95);
  for (int k = 0; k < 10000; ++k) {
    const double e = ecc(rng), varpi = angle(rng), L = angle(rng);
    const PlanetModel m = PlanetModel::make(1.0, e, varpi, 1.0, 1.0, false);
    const double lhs = 1.0 + m.f * std::cos(L) + m.g * std::sin(L);
    const double rhs = 1.0 + e * std::cos(L - varpi);
    CHECK(std::abs(lhs - rhs) < 1e-12);
  }
}

TEST_CASE("elliptic longitude propagation matches the Kepler period to relative 1e-6") {
  // Propagate dL/dt through exactly one Kepler period T = 2 pi sqrt(a^3/mu);
  // the true longitude must advance by exactly 2 pi.
  for (double e : {0.0167, 0.0935, 0.3}) {
    const double a = 1.3, mu = 1.0, varpi = 0.7;
    const PlanetModel m = PlanetModel::make(a, e, varpi, mu, 1.0, false);
    const double period = 2.0 * kPi * std::sqrt(a * a * a / mu);
    OdeRhs rhs = [&m](double, const Eigen::VectorXd& x) {
      return (Eigen::VectorXd(1) << true_longitude_rate(m, x[0])).finished();
    };
    const Eigen::VectorXd L0 = (Eigen::VectorXd(1) << varpi + 0.3).finished();
    const Eigen::VectorXd Lf = integrate_to(rhs, L0, 0.0, period);
    CHECK(std::abs((Lf[0] - L0[0]) - 2.0 * kPi) < 1e-6 * 2.0 * kPi);
  }
}

TEST_CASE("radius rate is the time derivative of the conic radius") {
  const PlanetModel m = PlanetModel::make(1.0, 0.2, 0.4, 1.0, 1.0, false);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi);
  for (int k = 0; k < 100; ++k) {
    const double L = angle(rng);
    const double Ld = true_longitude_rate(m, L);
    const double h = 1e-6;
    const double fd = (planet_radius(m, L + h * Ld) - planet_radius(m, L - h * Ld)) / (2.0 * h);
    CHECK(planet_radius_rate(m, L, Ld) == doctest::Approx(fd).epsilon(1e-7));
  }
}
