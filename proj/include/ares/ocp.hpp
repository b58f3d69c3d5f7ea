// Assembly of the multi-phase minimum-time transfer optimal control problem:
// per-phase dynamics contexts, variable bounds, boundary pins, event
// constraints linking consecutive phases, and the transfer-time objective.
//
// Times are carried per phase in that phase's own canonical unit; the event
// constraints apply the Earth->helio / Mars->helio time factors at the phase
// junctions, and the objective converts both endpoint times to heliocentric
// canonical before subtracting.
#pragma once

#include <Eigen/Core>
#include <optional>
#include <string>
#include <vector>

#include "ares/astro.hpp"
#include "ares/dynamics.hpp"
#include "ares/frames.hpp"

namespace ares {

enum class Variant { four_phase, three_phase_comparison };

struct ProblemConfig {
  Mode mode = Mode::circular;
  Variant variant = Variant::four_phase;
  double a_thrust_si = 9.8e-4;        ///< thrust specific force [m/s^2]
  std::string epoch_utc = "2019-01-01";
  double L_E0 = deg2rad(101.14);      ///< Earth true longitude at epoch [rad]
  double L_M0 = deg2rad(41.23);       ///< Mars true longitude at epoch [rad]
  double e_E = 0.0167;
  double e_M = 0.0935;
  double r_park_E = 6.6;              ///< initial parking radius [R_E]
  double r_park_M = 6.0;              ///< final capture radius [R_M]
  std::optional<double> fixed_phase_angle;  ///< L_M - L_E at start (three-phase only) [rad]
  // The classical capture-phase bound set lists v_r >= 0 for the capture phase, but the
  // capture radius must fall from the sphere of influence to the parking
  // orbit, which forces v_r < 0 on average; with the bound enforced the phase
  // is infeasible.  Default is therefore the relaxed bound, with a switch to
  // restore the printed one.
  bool relax_phase4_vr = true;
  // With gravity perturbations the sphere-of-influence handoff radii are
  // model parameters rather than hard SOI crossings: both adjacent frames
  // describe the same three-body physics near the boundary, which makes the
  // junction placement a nearly null direction of the optimization.  Leaving
  // it free lets the solver drift along that direction and stall, so the
  // handoff is fixed at a prescribed multiple of each SOI radius: slightly
  // outside Earth's (escape ends once the Sun clearly dominates) and inside
  // Mars's (capture starts once Mars clearly dominates).
  double handoff_escape_ratio = 1.01;   ///< phase-2 terminal r / R_E_SOI (perturbed mode)
  double handoff_capture_ratio = 0.86;  ///< phase-4 initial r / R_M_SOI (perturbed mode)

  void validate() const;
};

/// Equality pin of one state component at a phase boundary.
struct BoundaryPin {
  int state_index;
  double value;
};

struct PhaseDefinition {
  int id;   ///< mission phase number, 1..4
  int nx;   ///< 2 for the alignment phase, 6 otherwise
  int nu;   ///< 0 or 2
  PhaseContext ctx;
  Eigen::VectorXd x_lower, x_upper;
  Eigen::VectorXd u_lower, u_upper;
  double t0_lower, t0_upper;
  double tf_lower, tf_upper;
  double dur_lower, dur_upper;  ///< bounds on tf - t0 [phase canonical]
  std::vector<BoundaryPin> initial_pins, final_pins;
  std::optional<double> t0_fixed;
};

enum class EventKind { alignment_to_earth, earth_to_helio, helio_to_mars };

/// Event constraint set linking the terminus of phase `from` to the start of
/// phase `to` (indices into Problem::phases).
struct EventLink {
  EventKind kind;
  int from;
  int to;
  ConversionFactors factors;  ///< planet units -> heliocentric units
  int rows;                   ///< 3 or 7
};

struct Problem {
  ProblemConfig config;
  PhysicalConstants constants;
  std::array<ScaleSet, 4> scales;  ///< indexed by mission phase - 1
  std::vector<PhaseDefinition> phases;
  std::vector<EventLink> links;
  // Objective J = tf_factor * tf(obj_tf_phase) - t0_factor * t0(obj_t0_phase),
  // in heliocentric canonical time.
  int obj_t0_phase;
  int obj_tf_phase;
  double t0_factor;
  double tf_factor;

  const PhaseDefinition& phase_by_id(int id) const;
};

Problem build_problem(const ProblemConfig& config, const PhysicalConstants& constants);

/// Transfer duration in days given the endpoint times in phase-local
/// canonical units.
double objective_days(const Problem& p, double t0_transfer, double tf_capture);

/// One endpoint of a phase: (t, r, theta, v_r, v_theta, L_E, L_M).  For the
/// alignment phase only (t, L_E, L_M) are meaningful.
struct PhaseEndpoint {
  double t = 0, r = 0, theta = 0, v_r = 0, v_theta = 0, L_E = 0, L_M = 0;
};

// Templated event residual kernels.  Endpoint layout: {t, r, theta, v_r,
// v_theta, L_E, L_M} (alignment kernel uses {t, L_E, L_M}).  Planet radius,
// radius rate, and longitude rate are evaluated from the heliocentric-side
// longitudes using the heliocentric-phase planet model.

template <class T>
void alignment_kernel(const T end1[3], const T start2[3], T out[3]) {
  out[0] = end1[0] - start2[0];
  out[1] = end1[1] - start2[1];
  out[2] = end1[2] - start2[2];
}

template <class T>
void planet_to_helio_link_kernel(const PlanetModel& planet_helio, const ConversionFactors& cf,
                                 const T planet_side[7], const T helio_side[7],
                                 bool planet_is_mars, T out[7]) {
  using std::cos;
  using std::sin;
  const T& t_p = planet_side[0];
  const T& r_p = planet_side[1];
  const T& th_p = planet_side[2];
  const T& vr_p = planet_side[3];
  const T& vt_p = planet_side[4];
  const T& t_h = helio_side[0];
  const T& r_h = helio_side[1];
  const T& th_h = helio_side[2];
  const T& vr_h = helio_side[3];
  const T& vt_h = helio_side[4];
  const T& LQ_h = planet_is_mars ? helio_side[6] : helio_side[5];

  const T R = planet_radius(planet_helio, LQ_h);
  const T L_dot = true_longitude_rate(planet_helio, LQ_h);
  const T R_dot = planet_radius_rate(planet_helio, LQ_h, L_dot);

  const T alpha = th_p - LQ_h;
  const T beta = th_p - th_h;
  const T ca = cos(alpha), sa = sin(alpha), cb = cos(beta), sb = sin(beta);

  out[0] = t_p * cf.T_ratio - t_h;
  out[1] = planet_side[5] - helio_side[5];
  out[2] = planet_side[6] - helio_side[6];
  out[3] = r_p * cf.D_ratio - (-R * ca + r_h * cb);
  out[4] = -(-R * sa + r_h * sb);
  out[5] = vr_p * cf.V_ratio - (-R_dot * ca - R * L_dot * sa + vr_h * cb + vt_h * sb);
  out[6] = vt_p * cf.V_ratio - (R_dot * sa - R * L_dot * ca - vr_h * sb + vt_h * cb);
}

// Double-typed wrappers over the kernels.

Eigen::Vector3d event_alignment_to_earth(const PhaseEndpoint& end1, const PhaseEndpoint& start2);

/// Eq. linking Earth-escape terminus to heliocentric start; earth_helio is the
/// Earth model in heliocentric canonical units, factors Earth->helio.
Eigen::Matrix<double, 7, 1> event_earth_to_helio(const PlanetModel& earth_helio,
                                                 const ConversionFactors& factors,
                                                 const PhaseEndpoint& end2,
                                                 const PhaseEndpoint& start3);

/// Eq. linking heliocentric terminus to Mars-capture start; mars_helio is the
/// Mars model in heliocentric canonical units, factors Mars->helio.
Eigen::Matrix<double, 7, 1> event_helio_to_mars(const PlanetModel& mars_helio,
                                                const ConversionFactors& factors,
                                                const PhaseEndpoint& end3,
                                                const PhaseEndpoint& start4);

}  // namespace ares
