#include "ares/ocp.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace ares {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Eigen::VectorXd free_vec(int n) { return Eigen::VectorXd::Constant(n, -kInf); }

PlanetModel earth_model(const PhysicalConstants& c, const ProblemConfig& cfg, double mu_sun,
                        double length_unit) {
  return PlanetModel::make(c.R_SE, cfg.e_E, c.varpi_E, mu_sun, length_unit,
                           cfg.mode == Mode::circular);
}

PlanetModel mars_model(const PhysicalConstants& c, const ProblemConfig& cfg, double mu_sun,
                       double length_unit) {
  return PlanetModel::make(c.R_SM, cfg.e_M, c.varpi_M, mu_sun, length_unit,
                           cfg.mode == Mode::circular);
}

}  // namespace

void ProblemConfig::validate() const {
  if (!(a_thrust_si > 0.0)) throw std::invalid_argument("thrust acceleration must be positive");
  if (!(e_E >= 0.0 && e_E < 1.0 && e_M >= 0.0 && e_M < 1.0))
    throw std::invalid_argument("eccentricities must lie in [0, 1)");
  if (!(r_park_E > 1.0 && r_park_M > 1.0))
    throw std::invalid_argument("parking radii must exceed the planet radius");
  if (!(handoff_escape_ratio >= 1.0 && handoff_escape_ratio <= 1.5))
    throw std::invalid_argument("handoff_escape_ratio must lie in [1, 1.5]");
  if (!(handoff_capture_ratio >= 0.5 && handoff_capture_ratio <= 1.0))
    throw std::invalid_argument("handoff_capture_ratio must lie in [0.5, 1]");
  if (variant == Variant::three_phase_comparison) {
    if (!fixed_phase_angle.has_value())
      throw std::invalid_argument("three-phase variant requires fixed_phase_angle");
    if (mode != Mode::circular)
      throw std::invalid_argument("three-phase comparison runs in circular mode");
  }
}

const PhaseDefinition& Problem::phase_by_id(int id) const {
  for (const auto& ph : phases)
    if (ph.id == id) return ph;
  throw std::out_of_range("no such phase in problem");
}

Problem build_problem(const ProblemConfig& config, const PhysicalConstants& constants) {
  config.validate();
  constants.validate();

  Problem prob;
  prob.config = config;
  prob.constants = constants;
  prob.scales = make_scales(constants);
  const ScaleSet& helio = prob.scales[0];
  const ScaleSet& earth = prob.scales[1];
  const ScaleSet& mars = prob.scales[3];

  const bool four_phase = config.variant == Variant::four_phase;
  const bool perturbed = config.mode == Mode::elliptic_perturbed;

  auto thrust_canonical = [&](const ScaleSet& s) {
    return config.a_thrust_si * s.T * s.T / s.D;
  };

  // ---- Phase 1: planetary alignment (heliocentric units, longitudes only).
  if (four_phase) {
    PhaseDefinition ph;
    ph.id = 1;
    ph.nx = 2;
    ph.nu = 0;
    ph.ctx = PhaseContext{1, config.mode, 1.0, 0.0, 0.0, 0.0, 0.0,
                          earth_model(constants, config, 1.0, constants.R_SE),
                          mars_model(constants, config, 1.0, constants.R_SE)};
    ph.x_lower = free_vec(2);
    ph.x_upper = -free_vec(2);
    ph.t0_lower = 0.0;
    ph.t0_upper = kInf;
    ph.tf_lower = 0.0;
    ph.tf_upper = kInf;
    ph.dur_lower = 1e-3;
    ph.dur_upper = 30.0;  // ~1740 days, far beyond one synodic period
    ph.initial_pins = {{0, config.L_E0}, {1, config.L_M0}};
    ph.t0_fixed = 0.0;
    prob.phases.push_back(ph);
  }

  // ---- Phase 2: Earth escape spiral (Earth canonical units).
  {
    PhaseDefinition ph;
    ph.id = 2;
    ph.nx = 6;
    ph.nu = 2;
    const double mu_sun = constants.mu_S / constants.mu_E;
    ph.ctx = PhaseContext{2,
                          config.mode,
                          1.0,
                          thrust_canonical(earth),
                          mu_sun,
                          0.0,
                          0.0,
                          earth_model(constants, config, mu_sun, constants.R_E),
                          mars_model(constants, config, mu_sun, constants.R_E)};
    const double r_soi = constants.R_E_SOI / constants.R_E;
    ph.x_lower = free_vec(6);
    ph.x_upper = -free_vec(6);
    ph.x_lower[0] = config.r_park_E;
    // In perturbed mode the handoff moves slightly past the sphere of
    // influence (see ProblemConfig::handoff_escape_ratio).
    const double r_end = perturbed ? config.handoff_escape_ratio * r_soi : r_soi;
    ph.x_upper[0] = r_end;
    ph.x_lower[2] = 0.0;
    ph.u_lower = Eigen::Vector2d::Constant(-1.1);
    ph.u_upper = Eigen::Vector2d::Constant(1.1);
    ph.t0_lower = -kInf;
    ph.t0_upper = kInf;
    ph.tf_lower = -kInf;
    ph.tf_upper = kInf;
    ph.dur_lower = 100.0;
    ph.dur_upper = 50000.0;  // ~470 days in Earth canonical time
    ph.initial_pins = {{0, config.r_park_E},
                       {2, 0.0},
                       {3, std::sqrt(1.0 / config.r_park_E)}};
    ph.final_pins = {{0, r_end}};
    if (!four_phase) {
      // Three-phase comparison: the spiral starts at t = 0 with the planets at
      // the prescribed phase angle.
      ph.t0_fixed = 0.0;
      const double L_E_start = config.L_E0;
      const double L_M_start = config.L_E0 + config.fixed_phase_angle.value();
      ph.initial_pins.push_back({4, L_E_start});
      ph.initial_pins.push_back({5, L_M_start});
    }
    prob.phases.push_back(ph);
  }

  // ---- Phase 3: heliocentric transfer.
  {
    PhaseDefinition ph;
    ph.id = 3;
    ph.nx = 6;
    ph.nu = 2;
    ph.ctx = PhaseContext{3,
                          config.mode,
                          1.0,
                          thrust_canonical(helio),
                          0.0,
                          constants.mu_E / constants.mu_S,
                          constants.mu_M / constants.mu_S,
                          earth_model(constants, config, 1.0, constants.R_SE),
                          mars_model(constants, config, 1.0, constants.R_SE)};
    ph.x_lower = free_vec(6);
    ph.x_upper = -free_vec(6);
    ph.u_lower = Eigen::Vector2d::Constant(-1.1);
    ph.u_upper = Eigen::Vector2d::Constant(1.1);
    ph.t0_lower = -kInf;
    ph.t0_upper = kInf;
    ph.tf_lower = -kInf;
    ph.tf_upper = kInf;
    ph.dur_lower = 0.2;
    ph.dur_upper = 8.0;  // ~465 days heliocentric
    prob.phases.push_back(ph);
  }

  // ---- Phase 4: Mars capture spiral (Mars canonical units).
  {
    PhaseDefinition ph;
    ph.id = 4;
    ph.nx = 6;
    ph.nu = 2;
    const double mu_sun = constants.mu_S / constants.mu_M;
    ph.ctx = PhaseContext{4,
                          config.mode,
                          1.0,
                          thrust_canonical(mars),
                          mu_sun,
                          0.0,
                          0.0,
                          earth_model(constants, config, mu_sun, constants.R_M),
                          mars_model(constants, config, mu_sun, constants.R_M)};
    const double r_soi = constants.R_M_SOI / constants.R_M;
    ph.x_lower = free_vec(6);
    ph.x_upper = -free_vec(6);
    ph.x_lower[0] = config.r_park_M;
    // In perturbed mode the capture handoff sits inside the sphere of
    // influence (see ProblemConfig::handoff_capture_ratio).
    const double r_start = perturbed ? config.handoff_capture_ratio * r_soi : r_soi;
    ph.x_upper[0] = r_soi;
    ph.x_lower[2] = config.relax_phase4_vr ? -kInf : 0.0;
    ph.u_lower = Eigen::Vector2d::Constant(-1.1);
    ph.u_upper = Eigen::Vector2d::Constant(1.1);
    ph.t0_lower = -kInf;
    ph.t0_upper = kInf;
    ph.tf_lower = -kInf;
    ph.tf_upper = kInf;
    ph.dur_lower = 100.0;
    ph.dur_upper = 50000.0;  // ~550 days in Mars canonical time
    ph.initial_pins = {{0, r_start}};
    ph.final_pins = {{0, config.r_park_M},
                     {2, 0.0},
                     {3, std::sqrt(1.0 / config.r_park_M)}};
    prob.phases.push_back(ph);
  }

  // ---- Event links.
  const int off = four_phase ? 1 : 0;  // index of phase 2 in prob.phases
  if (four_phase)
    prob.links.push_back({EventKind::alignment_to_earth, 0, 1, {1.0, 1.0, 1.0}, 3});
  prob.links.push_back(
      {EventKind::earth_to_helio, off, off + 1, conversion(earth, helio), 7});
  prob.links.push_back(
      {EventKind::helio_to_mars, off + 1, off + 2, conversion(mars, helio), 7});

  // ---- Objective: heliocentric-canonical transfer duration.
  prob.obj_t0_phase = off;
  prob.obj_tf_phase = off + 2;
  prob.t0_factor = conversion(earth, helio).T_ratio;
  prob.tf_factor = conversion(mars, helio).T_ratio;
  return prob;
}

double objective_days(const Problem& p, double t0_transfer, double tf_capture) {
  const double J = p.tf_factor * tf_capture - p.t0_factor * t0_transfer;
  return J * p.scales[0].T / kSecondsPerDay;
}

Eigen::Vector3d event_alignment_to_earth(const PhaseEndpoint& end1, const PhaseEndpoint& start2) {
  const double a[3] = {end1.t, end1.L_E, end1.L_M};
  const double b[3] = {start2.t, start2.L_E, start2.L_M};
  Eigen::Vector3d out;
  alignment_kernel(a, b, out.data());
  return out;
}

namespace {

void pack(const PhaseEndpoint& e, double v[7]) {
  v[0] = e.t;
  v[1] = e.r;
  v[2] = e.theta;
  v[3] = e.v_r;
  v[4] = e.v_theta;
  v[5] = e.L_E;
  v[6] = e.L_M;
}

}  // namespace

Eigen::Matrix<double, 7, 1> event_earth_to_helio(const PlanetModel& earth_helio,
                                                 const ConversionFactors& factors,
                                                 const PhaseEndpoint& end2,
                                                 const PhaseEndpoint& start3) {
  double a[7], b[7];
  pack(end2, a);
  pack(start3, b);
  Eigen::Matrix<double, 7, 1> out;
  planet_to_helio_link_kernel(earth_helio, factors, a, b, false, out.data());
  return out;
}

Eigen::Matrix<double, 7, 1> event_helio_to_mars(const PlanetModel& mars_helio,
                                                const ConversionFactors& factors,
                                                const PhaseEndpoint& end3,
                                                const PhaseEndpoint& start4) {
  double a[7], b[7];
  pack(start4, a);
  pack(end3, b);
  Eigen::Matrix<double, 7, 1> out;
  planet_to_helio_link_kernel(mars_helio, factors, a, b, true, out.data());
  return out;
}

}  // namespace ares
