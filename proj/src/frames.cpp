#include "ares/frames.hpp"

#include <Eigen/Core>

namespace ares {

namespace {
constexpr double kDegenerateRadius = 1e-12;

Eigen::Vector2d radial(double angle) { return {std::cos(angle), std::sin(angle)}; }
Eigen::Vector2d transverse(double angle) { return {-std::sin(angle), std::cos(angle)}; }
}  // namespace

HelioState planet_to_helio(const PlanetKinematics& planet, const SpacecraftState& local,
                           double phi_hint) {
  const Eigen::Vector2d q1 = radial(planet.L), q2 = transverse(planet.L);
  const Eigen::Vector2d u1 = radial(local.theta), u2 = transverse(local.theta);

  const Eigen::Vector2d pos = planet.R * q1 + local.r * u1;
  const double rho = pos.norm();
  if (rho < kDegenerateRadius) throw std::domain_error("planet_to_helio: spacecraft at the Sun");

  const Eigen::Vector2d vel =
      planet.R_dot * q1 + planet.R * planet.L_dot * q2 + local.v_r * u1 + local.v_theta * u2;

  const Eigen::Vector2d h1 = pos / rho;
  const Eigen::Vector2d h2(-h1.y(), h1.x());

  HelioState out;
  out.rho = rho;
  out.phi = unwrap_near(std::atan2(pos.y(), pos.x()), phi_hint);
  out.v_rho = vel.dot(h1);
  out.v_phi = vel.dot(h2);
  return out;
}

SpacecraftState helio_to_planet(const PlanetKinematics& planet, const HelioState& helio,
                                double theta_hint) {
  const Eigen::Vector2d q1 = radial(planet.L), q2 = transverse(planet.L);
  const Eigen::Vector2d h1 = radial(helio.phi), h2 = transverse(helio.phi);

  const Eigen::Vector2d rel = helio.rho * h1 - planet.R * q1;
  const double r = rel.norm();
  if (r < kDegenerateRadius) throw std::domain_error("helio_to_planet: spacecraft at the planet");

  const Eigen::Vector2d vel = helio.v_rho * h1 + helio.v_phi * h2;
  const Eigen::Vector2d vel_rel = vel - (planet.R_dot * q1 + planet.R * planet.L_dot * q2);

  const Eigen::Vector2d u1 = rel / r;
  const Eigen::Vector2d u2(-u1.y(), u1.x());

  SpacecraftState out;
  out.r = r;
  out.theta = unwrap_near(std::atan2(rel.y(), rel.x()), theta_hint);
  out.v_r = vel_rel.dot(u1);
  out.v_theta = vel_rel.dot(u2);
  return out;
}

}  // namespace ares
