#include <cmath>
#include <random>

#include "ares/astro.hpp"
#include "ares/propagate.hpp"
#include "doctest.h"

using namespace ares;

namespace {

// Planar two-body motion in polar coordinates (r, theta, v_r, v_theta), mu=1.
Eigen::VectorXd two_body(double, const Eigen::VectorXd& x) {
  Eigen::VectorXd dx(4);
  dx[0] = x[2];
  dx[1] = x[3] / x[0];
  dx[2] = -1.0 / (x[0] * x[0]) + x[3] * x[3] / x[0];
  dx[3] = -x[2] * x[3] / x[0];
  return dx;
}

double energy(const Eigen::VectorXd& x) {
  return 0.5 * (x[2] * x[2] + x[3] * x[3]) - 1.0 / x[0];
}
double ang_mom(const Eigen::VectorXd& x) { return x[0] * x[3]; }

}  // namespace

TEST_CASE("two-body conservation drift < 1e-9 per orbit at tolerance 1e-12") {
  std::mt19937_64 rng(31337);
  std::uniform_real_distribution<double> ed(0.0, 0.6), ad(0.7, 1.8);
  OdeOptions opts;
  opts.rtol = 1e-12;
  opts.atol = 1e-12;
  for (int k = 0; k < 20; ++k) {
    const double a = ad(rng), e = ed(rng);
    const double rp = a * (1.0 - e);
    Eigen::VectorXd x0(4);
    x0 << rp, 0.0, 0.0, std::sqrt((1.0 + e) / rp);  // perihelion start
    const double period = 2.0 * kPi * std::sqrt(a * a * a);
    const double orbits = 3.0;
    const Eigen::VectorXd xf = integrate_to(two_body, x0, 0.0, orbits * period, opts);
    CHECK(std::abs(energy(xf) - energy(x0)) / std::max(1.0, std::abs(energy(x0))) <
          1e-9 * orbits);
    CHECK(std::abs(ang_mom(xf) - ang_mom(x0)) / ang_mom(x0) < 1e-9 * orbits);
    // One full period returns to the initial state (radius / velocities).
    const Eigen::VectorXd x1 = integrate_to(two_body, x0, 0.0, period, opts);
    CHECK(std::abs(x1[0] - x0[0]) < 1e-8 * a);
    CHECK(std::abs(x1[2] - x0[2]) < 1e-8);
  }
}

TEST_CASE("integrate records monotone accepted steps from t0 to t1") {
  Eigen::VectorXd x0(4);
  x0 << 1.0, 0.0, 0.0, 1.0;
  const OdeTrajectory traj = integrate(two_body, x0, 0.0, 2.0);
  REQUIRE(traj.t.size() >= 2);
  CHECK(traj.t.front() == 0.0);
  CHECK(traj.t.back() == doctest::Approx(2.0).epsilon(1e-14));
  for (size_t i = 1; i < traj.t.size(); ++i) CHECK(traj.t[i] > traj.t[i - 1]);
}

TEST_CASE("integrate_at matches integrate_to at interior sample times") {
  Eigen::VectorXd x0(4);
  x0 << 1.1, 0.2, 0.05, 0.95;
  const std::vector<double> times{0.0, 0.7, 1.9, 3.4};
  const auto samples = integrate_at(two_body, x0, 0.0, times);
  REQUIRE(samples.size() == times.size());
  CHECK((samples[0] - x0).lpNorm<Eigen::Infinity>() == 0.0);
  for (size_t i = 1; i < times.size(); ++i) {
    const Eigen::VectorXd direct = integrate_to(two_body, x0, 0.0, times[i]);
    CHECK((samples[i] - direct).lpNorm<Eigen::Infinity>() < 1e-9);
  }
}

TEST_CASE("exponential decay matches the closed form at loose and tight tolerance") {
  OdeRhs rhs = [](double, const Eigen::VectorXd& x) {
    return Eigen::VectorXd::Constant(1, -2.0 * x[0]);
  };
  Eigen::VectorXd x0 = Eigen::VectorXd::Constant(1, 3.0);
  const Eigen::VectorXd xf = integrate_to(rhs, x0, 0.0, 1.5);
  CHECK(xf[0] == doctest::Approx(3.0 * std::exp(-3.0)).epsilon(1e-10));
}
