// Physical constants, planar planetary element models, and closed-form conic
// quantities shared by every other module.  All numerics downstream run in
// per-phase canonical units; constants here are stored in SI and converted
// once at problem-assembly time.
#pragma once

#include <cmath>
#include <stdexcept>

namespace ares {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kSecondsPerDay = 86400.0;

inline double deg2rad(double deg) { return deg * kPi / 180.0; }
inline double rad2deg(double rad) { return rad * 180.0 / kPi; }

/// Planetary and solar constants (SI).  Angles in radians.
struct PhysicalConstants {
  double R_E;       ///< Earth radius [m]
  double R_M;       ///< Mars radius [m]
  double R_E_SOI;   ///< Earth sphere-of-influence radius [m]
  double R_M_SOI;   ///< Mars sphere-of-influence radius [m]
  double R_SE;      ///< Sun-Earth distance (semi-major axis) [m]
  double R_SM;      ///< Sun-Mars distance (semi-major axis) [m]
  double mu_E;      ///< Earth gravitational parameter [m^3/s^2]
  double mu_S;      ///< Sun gravitational parameter [m^3/s^2]
  double mu_M;      ///< Mars gravitational parameter [m^3/s^2]
  double varpi_E;   ///< Earth longitude of perihelion [rad]
  double varpi_M;   ///< Mars longitude of perihelion [rad]

  static PhysicalConstants defaults() {
    PhysicalConstants c;
    c.R_E = 6.3781e6;
    c.R_M = 3.3895e6;
    c.R_E_SOI = 9.2455e8;
    c.R_M_SOI = 5.7717e8;
    c.R_SE = 1.4960e11;
    c.R_SM = 2.2794e11;
    c.mu_E = 3.9860e14;
    c.mu_S = 1.3271e20;
    c.mu_M = 4.2828e13;
    c.varpi_E = deg2rad(102.9);
    c.varpi_M = deg2rad(336.0);
    return c;
  }

  void validate() const {
    auto positive = [](double x, const char* name) {
      if (!(x > 0.0)) throw std::invalid_argument(std::string("non-positive constant: ") + name);
    };
    positive(R_E, "R_E");
    positive(R_M, "R_M");
    positive(R_E_SOI, "R_E_SOI");
    positive(R_M_SOI, "R_M_SOI");
    positive(R_SE, "R_SE");
    positive(R_SM, "R_SM");
    positive(mu_E, "mu_E");
    positive(mu_S, "mu_S");
    positive(mu_M, "mu_M");
    if (!(R_E < R_E_SOI && R_E_SOI < R_SE))
      throw std::invalid_argument("require R_E < R_E_SOI < R_SE");
    if (!(R_M < R_M_SOI && R_M_SOI < R_SM))
      throw std::invalid_argument("require R_M < R_M_SOI < R_SM");
  }
};

/// Planar orbit of one planet, expressed in the canonical units of some phase.
/// f and g are the standard modified equinoctial eccentricity components,
/// f = e*cos(varpi), g = e*sin(varpi); circular models force e = f = g = 0.
struct PlanetModel {
  double p;           ///< semi-latus rectum [canonical length]
  double e;           ///< eccentricity
  double varpi;       ///< longitude of perihelion [rad]
  double mu_central;  ///< Sun gravitational parameter [canonical]
  double f;           ///< e*cos(varpi)
  double g;           ///< e*sin(varpi)

  /// Build from SI semi-major axis.  In circular mode p = a, otherwise
  /// p = a*(1 - e^2), so the two models agree as e -> 0.
  static PlanetModel make(double a_si, double ecc, double varpi, double mu_sun_canonical,
                          double length_unit_si, bool circular) {
    PlanetModel m;
    m.e = circular ? 0.0 : ecc;
    m.varpi = varpi;
    m.mu_central = mu_sun_canonical;
    const double p_si = circular ? a_si : a_si * (1.0 - ecc * ecc);
    m.p = p_si / length_unit_si;
    m.f = m.e * std::cos(varpi);
    m.g = m.e * std::sin(varpi);
    if (!(m.p > 0.0) || !(m.e >= 0.0 && m.e < 1.0))
      throw std::invalid_argument("invalid planet model");
    return m;
  }
};

/// True longitude of a planet and the phase-canonical time it refers to.
struct PlanetState {
  double L;  ///< true longitude from the line of Aries [rad], unwrapped
  double t;  ///< canonical time
};

/// nu = L - varpi.  Not wrapped; callers wrap only for display.
template <class T>
T true_anomaly(const PlanetModel& m, const T& L) {
  return L - m.varpi;
}

/// Conic radius r = p / (1 + e*cos(L - varpi)).
template <class T>
T planet_radius(const PlanetModel& m, const T& L) {
  using std::cos;
  const T nu = true_anomaly(m, L);
  return m.p / (1.0 + m.e * cos(nu));
}

/// Radius rate rdot = p*e*Ldot*sin(nu) / (1 + e*cos(nu))^2, with nudot = Ldot.
template <class T>
T planet_radius_rate(const PlanetModel& m, const T& L, const T& L_dot) {
  using std::cos;
  using std::sin;
  const T nu = true_anomaly(m, L);
  const T denom = 1.0 + m.e * cos(nu);
  return m.p * m.e * L_dot * sin(nu) / (denom * denom);
}

/// Keplerian true-longitude rate, Ldot = sqrt(mu/p^3) * (1 + f*cosL + g*sinL)^2.
template <class T>
T true_longitude_rate(const PlanetModel& m, const T& L) {
  using std::cos;
  using std::sin;
  const T q = 1.0 + m.f * cos(L) + m.g * sin(L);
  return std::sqrt(m.mu_central / (m.p * m.p * m.p)) * q * q;
}

}  // namespace ares
