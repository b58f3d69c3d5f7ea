// Right-hand sides of all differential equations: planetary true-longitude
// rates, spacecraft polar dynamics, and the Cowell gravity perturbations of
// phases 2, 3, 4.  Everything is templated on the scalar type so the same
// kernels serve plain evaluation, Jacobians (Dual), and Hessians (Dual2).
//
// Note on the phase-3 perturbations: only the direct term -mu_Q*r_PQ/|r_PQ|^3
// appears; the indirect term of a Sun-centered non-inertial correction is
// deliberately absent, matching the Cowell expressions this model is built on.
#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>

#include "ares/astro.hpp"
#include "ares/dual.hpp"
#include "ares/frames.hpp"

namespace ares {

/// Thrown when a dynamics evaluation hits a degenerate geometry (collision
/// radii, non-positive r).  The NLP layer reports it as an evaluation fault so
/// the solver's line search sees the failure instead of a clamped value.
struct EvaluationFault : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Mode { circular, elliptic, elliptic_perturbed };

/// Unit thrust-direction sample.
struct ControlSample {
  double w_r;
  double w_theta;
};

/// Radial/transverse perturbing acceleration, canonical units of the phase.
struct PerturbationAccel {
  double a_pr;
  double a_ptheta;
};

/// Everything the dynamics of one phase need, pre-converted to that phase's
/// canonical units.  Perturbing gravitational parameters (mu_sun_pert etc.)
/// are zero when the corresponding body is not a perturber in the phase.
struct PhaseContext {
  int phase;              ///< 1..4
  Mode mode;
  double mu;              ///< central-body mu, = 1 by scaling
  double a_thrust;        ///< thrust specific force [canonical accel], 0 in phase 1
  double mu_sun_pert;     ///< Sun mu for phases 2/4 third-body terms
  double mu_earth_pert;   ///< Earth mu for phase-3 terms
  double mu_mars_pert;    ///< Mars mu for phase-3 terms
  PlanetModel earth;      ///< Earth elements in this phase's units
  PlanetModel mars;       ///< Mars elements in this phase's units

  bool perturbed() const { return mode == Mode::elliptic_perturbed; }
};

inline constexpr double kCollisionRadius = 1e-12;

namespace detail {

template <class T>
void check_radius(const T& r, const char* what) {
  if (!(value(r) > kCollisionRadius)) throw EvaluationFault(what);
}

/// Sun third-body perturbation on a planet-centered spacecraft (phases 2, 4).
/// rQ and LQ are the central planet's heliocentric radius and longitude.
template <class T>
void sun_perturbation(double mu_sun, const T& r, const T& theta, const T& LQ, const T& rQ,
                      T& a_pr, T& a_ptheta) {
  using std::cos;
  using std::sin;
  using std::sqrt;
  const T c = cos(theta - LQ);
  const T s = sin(theta - LQ);
  const T r_ps = sqrt(rQ * rQ + r * r + 2.0 * r * rQ * c);
  check_radius(r_ps, "degenerate Sun-spacecraft distance");
  const T inv3 = 1.0 / (r_ps * r_ps * r_ps);
  const T invQ2 = 1.0 / (rQ * rQ);
  a_pr = -mu_sun * (r * inv3 + (rQ * inv3 - invQ2) * c);
  a_ptheta = -mu_sun * (invQ2 - rQ * inv3) * s;
}

/// Direct-term perturbation of planet Q on a Sun-centered spacecraft (phase 3).
template <class T>
void planet_perturbation(double mu_q, const T& r, const T& theta, const T& LQ, const T& rQ,
                         T& a_pr, T& a_ptheta) {
  using std::cos;
  using std::sin;
  using std::sqrt;
  const T c = cos(theta - LQ);
  const T s = sin(theta - LQ);
  const T r_pq = sqrt(rQ * rQ + r * r - 2.0 * r * rQ * c);
  check_radius(r_pq, "collision with perturbing planet");
  const T inv3 = 1.0 / (r_pq * r_pq * r_pq);
  a_pr = -mu_q * (r * inv3 - rQ * inv3 * c);
  a_ptheta = -mu_q * rQ * inv3 * s;
}

}  // namespace detail

/// True-longitude rates of both planets in the phase's canonical units.
template <class T>
void planet_pair_rates(const PhaseContext& ctx, const T& L_E, const T& L_M, T& dL_E, T& dL_M) {
  dL_E = true_longitude_rate(ctx.earth, L_E);
  dL_M = true_longitude_rate(ctx.mars, L_M);
}

/// Perturbing acceleration for the phase, evaluated at the given spacecraft
/// and planet states.  Zero unless the context runs in perturbed mode.
template <class T>
void perturbation(const PhaseContext& ctx, const T& r, const T& theta, const T& L_E, const T& L_M,
                  T& a_pr, T& a_ptheta) {
  a_pr = T(0.0);
  a_ptheta = T(0.0);
  if (!ctx.perturbed()) return;
  switch (ctx.phase) {
    case 2: {
      const T r_E = planet_radius(ctx.earth, L_E);
      detail::sun_perturbation(ctx.mu_sun_pert, r, theta, L_E, r_E, a_pr, a_ptheta);
      break;
    }
    case 3: {
      const T r_E = planet_radius(ctx.earth, L_E);
      const T r_M = planet_radius(ctx.mars, L_M);
      T er, et, mr, mt;
      detail::planet_perturbation(ctx.mu_earth_pert, r, theta, L_E, r_E, er, et);
      detail::planet_perturbation(ctx.mu_mars_pert, r, theta, L_M, r_M, mr, mt);
      a_pr = er + mr;
      a_ptheta = et + mt;
      break;
    }
    case 4: {
      const T r_M = planet_radius(ctx.mars, L_M);
      detail::sun_perturbation(ctx.mu_sun_pert, r, theta, L_M, r_M, a_pr, a_ptheta);
      break;
    }
    default:
      break;
  }
}

/// Full six-state right-hand side for a spacecraft phase.
/// State order: (r, theta, v_r, v_theta, L_E, L_M); control (w_r, w_theta).
template <class T>
void spacecraft_phase_rhs(const PhaseContext& ctx, const T x[6], const T u[2], T dx[6]) {
  const T& r = x[0];
  const T& theta = x[1];
  const T& v_r = x[2];
  const T& v_theta = x[3];
  detail::check_radius(r, "non-positive spacecraft radius");

  T a_pr, a_ptheta;
  perturbation(ctx, r, theta, x[4], x[5], a_pr, a_ptheta);

  dx[0] = v_r;
  dx[1] = v_theta / r;
  dx[2] = ctx.a_thrust * u[0] - ctx.mu / (r * r) + v_theta * v_theta / r + a_pr;
  dx[3] = ctx.a_thrust * u[1] - v_r * v_theta / r + a_ptheta;
  planet_pair_rates(ctx, x[4], x[5], dx[4], dx[5]);
}

/// Thrust-direction path constraint residual, w_r^2 + w_theta^2 - 1.
template <class T>
T path_constraint(const T& w_r, const T& w_theta) {
  return w_r * w_r + w_theta * w_theta - 1.0;
}

inline double path_constraint(const ControlSample& u) { return path_constraint(u.w_r, u.w_theta); }

// Double-typed convenience wrappers over the kernels above.

struct SpacecraftRates {
  double r_dot, theta_dot, v_r_dot, v_theta_dot;
};

inline SpacecraftRates spacecraft_rates(const PhaseContext& ctx, const SpacecraftState& s,
                                        const ControlSample& u, const PerturbationAccel& pert) {
  detail::check_radius(s.r, "non-positive spacecraft radius");
  SpacecraftRates d;
  d.r_dot = s.v_r;
  d.theta_dot = s.v_theta / s.r;
  d.v_r_dot = ctx.a_thrust * u.w_r - ctx.mu / (s.r * s.r) + s.v_theta * s.v_theta / s.r + pert.a_pr;
  d.v_theta_dot = ctx.a_thrust * u.w_theta - s.v_r * s.v_theta / s.r + pert.a_ptheta;
  return d;
}

inline std::pair<double, double> planetary_rates(const PhaseContext& ctx, double L_E, double L_M) {
  double dE, dM;
  planet_pair_rates(ctx, L_E, L_M, dE, dM);
  return {dE, dM};
}

inline PerturbationAccel perturbation_phase2(const PhaseContext& ctx, const SpacecraftState& s,
                                             double L_E, double r_E) {
  PerturbationAccel p;
  detail::sun_perturbation(ctx.mu_sun_pert, s.r, s.theta, L_E, r_E, p.a_pr, p.a_ptheta);
  return p;
}

inline PerturbationAccel perturbation_phase3(const PhaseContext& ctx, const SpacecraftState& s,
                                             double L_E, double L_M, double r_E, double r_M) {
  PerturbationAccel p;
  double er, et, mr, mt;
  detail::planet_perturbation(ctx.mu_earth_pert, s.r, s.theta, L_E, r_E, er, et);
  detail::planet_perturbation(ctx.mu_mars_pert, s.r, s.theta, L_M, r_M, mr, mt);
  p.a_pr = er + mr;
  p.a_ptheta = et + mt;
  return p;
}

inline PerturbationAccel perturbation_phase4(const PhaseContext& ctx, const SpacecraftState& s,
                                             double L_M, double r_M) {
  PerturbationAccel p;
  detail::sun_perturbation(ctx.mu_sun_pert, s.r, s.theta, L_M, r_M, p.a_pr, p.a_ptheta);
  return p;
}

}  // namespace ares
