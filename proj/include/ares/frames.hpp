// Per-phase canonical scaling, cross-phase unit conversions, and the
// planet-centered <-> heliocentric coordinate transformations.  Transforms are
// done by Cartesian assembly in the inertial basis; the trigonometric scalar
// relations are kept as residual checks in the test suite.
#pragma once

#include <array>
#include <cmath>
#include <stdexcept>

#include "ares/astro.hpp"

namespace ares {

/// Units making the central body's gravitational parameter equal to one.
struct ScaleSet {
  double D;       ///< length unit [m]
  double V;       ///< speed unit [m/s]
  double T;       ///< time unit [s]
  double mu_ref;  ///< gravitational parameter of the central body [m^3/s^2]

  static ScaleSet from_reference(double length_m, double mu) {
    ScaleSet s;
    s.D = length_m;
    s.mu_ref = mu;
    s.V = std::sqrt(mu / length_m);
    s.T = std::sqrt(length_m * length_m * length_m / mu);
    return s;
  }
};

/// Dimensionless ratios between two ScaleSets (D_ratio = V_ratio * T_ratio).
struct ConversionFactors {
  double D_ratio;
  double V_ratio;
  double T_ratio;
};

/// Spacecraft state relative to a planet, polar coordinates about that planet.
struct SpacecraftState {
  double r;        ///< planet-spacecraft distance [canonical length]
  double theta;    ///< longitude from the line of Aries [rad], unwrapped
  double v_r;      ///< radial velocity [canonical speed]
  double v_theta;  ///< transverse velocity [canonical speed]
};

/// Heliocentric polar state of the spacecraft.
struct HelioState {
  double rho;    ///< Sun-spacecraft distance
  double phi;    ///< heliocentric longitude from the line of Aries, unwrapped
  double v_rho;  ///< radial speed
  double v_phi;  ///< transverse speed
};

/// Instantaneous kinematics of a planet: radius, longitude, and their rates.
struct PlanetKinematics {
  double R;
  double L;
  double R_dot;
  double L_dot;
};

/// Scale sets for phases 1..4: reference lengths (R_SE, R_E, R_SE, R_M) and
/// central bodies (Sun, Earth, Sun, Mars).
inline std::array<ScaleSet, 4> make_scales(const PhysicalConstants& c) {
  c.validate();
  return {ScaleSet::from_reference(c.R_SE, c.mu_S), ScaleSet::from_reference(c.R_E, c.mu_E),
          ScaleSet::from_reference(c.R_SE, c.mu_S), ScaleSet::from_reference(c.R_M, c.mu_M)};
}

inline ConversionFactors conversion(const ScaleSet& from, const ScaleSet& to) {
  return {from.D / to.D, from.V / to.V, from.T / to.T};
}

/// Shift `angle` by a multiple of 2*pi so it lands nearest `hint`.
inline double unwrap_near(double angle, double hint) {
  if (!std::isfinite(hint)) return angle;
  const double two_pi = 2.0 * kPi;
  return angle + two_pi * std::round((hint - angle) / two_pi);
}

/// Planet-centered polar state -> heliocentric polar state.  All inputs must
/// share one unit system; phi is unwrapped near phi_hint.
HelioState planet_to_helio(const PlanetKinematics& planet, const SpacecraftState& local,
                           double phi_hint = std::nan(""));

/// Inverse transform; theta is unwrapped near theta_hint.
SpacecraftState helio_to_planet(const PlanetKinematics& planet, const HelioState& helio,
                                double theta_hint = std::nan(""));

}  // namespace ares
