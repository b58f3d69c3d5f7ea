#include <cmath>
#include <random>

#include "ares/ocp.hpp"
#include "doctest.h"

using namespace ares;

namespace {

PlanetKinematics kinematics(const PlanetModel& m, double L) {
  PlanetKinematics k;
  k.L = L;
  k.R = planet_radius(m, L);
  k.L_dot = true_longitude_rate(m, L);
  k.R_dot = planet_radius_rate(m, L, k.L_dot);
  return k;
}

const EventLink& link_of(const Problem& p, EventKind kind) {
  for (const EventLink& l : p.links)
    if (l.kind == kind) return l;
  REQUIRE(false);
  return p.links.front();
}

// Builds the heliocentric start state equivalent to a planet-phase terminal
// state via the frames transform, in the exact layout the event kernels use.
PhaseEndpoint transformed_start(const PlanetModel& planet_helio, const ConversionFactors& cf,
                                const PhaseEndpoint& planet_end, double L_Q) {
  const PlanetKinematics kin = kinematics(planet_helio, L_Q);
  const SpacecraftState local{planet_end.r * cf.D_ratio, planet_end.theta,
                              planet_end.v_r * cf.V_ratio, planet_end.v_theta * cf.V_ratio};
  const HelioState h = planet_to_helio(kin, local, planet_end.theta);
  PhaseEndpoint s;
  s.t = planet_end.t * cf.T_ratio;
  s.r = h.rho;
  s.theta = h.phi;
  s.v_r = h.v_rho;
  s.v_theta = h.v_phi;
  s.L_E = planet_end.L_E;
  s.L_M = planet_end.L_M;
  return s;
}

}  // namespace

TEST_CASE("alignment event is the componentwise difference") {
  const PhaseEndpoint a{5.0, 0, 0, 0, 0, 1.2, 3.4};
  PhaseEndpoint b = a;
  Eigen::Vector3d r = event_alignment_to_earth(a, b);
  CHECK(r.lpNorm<Eigen::Infinity>() == 0.0);
  b.L_E += 1e-3;
  r = event_alignment_to_earth(a, b);
  CHECK(r[1] == doctest::Approx(-1e-3));
}

TEST_CASE("transform-constructed states zero the junction events to 1e-12") {
  const PhysicalConstants constants = PhysicalConstants::defaults();
  for (Mode mode : {Mode::circular, Mode::elliptic}) {
    ProblemConfig cfg;
    cfg.mode = mode;
    const Problem problem = build_problem(cfg, constants);
    const PhaseContext& helio_ctx = problem.phase_by_id(3).ctx;

    std::mt19937_64 rng(777);
    std::uniform_real_distribution<double> ang(-6.0, 6.0), vd(-0.5, 1.8);

    SUBCASE("Earth-escape terminus to heliocentric start") {
      const EventLink& link = link_of(problem, EventKind::earth_to_helio);
      double worst = 0.0;
      for (int k = 0; k < 1000; ++k) {
        PhaseEndpoint end2;
        end2.t = 40.0 + ang(rng);
        end2.r = constants.R_E_SOI / constants.R_E;  // terminal radius pin
        end2.theta = ang(rng);
        end2.v_r = std::abs(vd(rng));
        end2.v_theta = vd(rng);
        end2.L_E = ang(rng);
        end2.L_M = ang(rng);
        const PhaseEndpoint start3 =
            transformed_start(helio_ctx.earth, link.factors, end2, end2.L_E);
        const auto res = event_earth_to_helio(helio_ctx.earth, link.factors, end2, start3);
        worst = std::max(worst, res.lpNorm<Eigen::Infinity>());
      }
      INFO("mode ", static_cast<int>(mode), " worst residual ", worst);
      CHECK(worst < 1e-12);
    }

    SUBCASE("heliocentric terminus to Mars-capture start (sign check incl. elliptic Mars)") {
      const EventLink& link = link_of(problem, EventKind::helio_to_mars);
      double worst = 0.0;
      for (int k = 0; k < 1000; ++k) {
        PhaseEndpoint start4;
        start4.t = 100.0 + ang(rng);
        start4.r = constants.R_M_SOI / constants.R_M;
        start4.theta = ang(rng);
        start4.v_r = vd(rng);
        start4.v_theta = vd(rng);
        start4.L_E = ang(rng);
        start4.L_M = ang(rng);
        // The helio-side endpoint is the transform of the Mars-side one.
        const PhaseEndpoint end3 =
            transformed_start(helio_ctx.mars, link.factors, start4, start4.L_M);
        const auto res = event_helio_to_mars(helio_ctx.mars, link.factors, end3, start4);
        worst = std::max(worst, res.lpNorm<Eigen::Infinity>());
      }
      INFO("mode ", static_cast<int>(mode), " worst residual ", worst);
      CHECK(worst < 1e-12);
    }
  }
}

TEST_CASE("boundary pins and bounds follow the tabulated values") {
  const PhysicalConstants constants = PhysicalConstants::defaults();
  ProblemConfig cfg;
  const Problem p = build_problem(cfg, constants);
  REQUIRE(p.phases.size() == 4);

  const PhaseDefinition& ph2 = p.phase_by_id(2);
  // Start pins: r = 6.6 R_E (canonical 6.6), v_r = 0, v_theta = sqrt(1/6.6).
  bool saw_r = false, saw_vt = false;
  for (const BoundaryPin& pin : ph2.initial_pins) {
    if (pin.state_index == 0) {
      saw_r = true;
      CHECK(pin.value == doctest::Approx(6.6).epsilon(1e-15));
    }
    if (pin.state_index == 3) {
      saw_vt = true;
      CHECK(pin.value == doctest::Approx(std::sqrt(1.0 / 6.6)).epsilon(1e-15));
    }
  }
  CHECK(saw_r);
  CHECK(saw_vt);
  // Box bounds: r in [6.6, SOI], v_r >= 0.
  CHECK(ph2.x_lower[0] == doctest::Approx(6.6).epsilon(1e-15));
  CHECK(ph2.x_upper[0] == doctest::Approx(constants.R_E_SOI / constants.R_E).epsilon(1e-15));
  CHECK(ph2.x_lower[2] == 0.0);

  const PhaseDefinition& ph4 = p.phase_by_id(4);
  CHECK(ph4.x_lower[0] == doctest::Approx(6.0).epsilon(1e-15));
  CHECK(ph4.x_upper[0] == doctest::Approx(constants.R_M_SOI / constants.R_M).epsilon(1e-15));
  // Default configuration relaxes the capture-phase radial-velocity floor so
  // the descent is reachable; the switch restores the tabulated bound.
  CHECK(ph4.x_lower[2] < 0.0);
  ProblemConfig strict = cfg;
  strict.relax_phase4_vr = false;
  const Problem ps = build_problem(strict, constants);
  CHECK(ps.phase_by_id(4).x_lower[2] == 0.0);
}

TEST_CASE("perturbed mode pins the handoff radii at the prescribed SOI multiples") {
  const PhysicalConstants constants = PhysicalConstants::defaults();
  ProblemConfig cfg;
  cfg.mode = Mode::elliptic_perturbed;
  const Problem p = build_problem(cfg, constants);
  const double r2_end = cfg.handoff_escape_ratio * constants.R_E_SOI / constants.R_E;
  const double r4_start = cfg.handoff_capture_ratio * constants.R_M_SOI / constants.R_M;

  // Escape ends slightly outside Earth's sphere of influence; the terminal
  // radius pin and the box upper bound coincide there.
  const auto& fin2 = p.phase_by_id(2).final_pins;
  REQUIRE(fin2.size() == 1);
  CHECK(fin2[0].state_index == 0);
  CHECK(fin2[0].value == doctest::Approx(r2_end).epsilon(1e-15));
  CHECK(p.phase_by_id(2).x_upper[0] == doctest::Approx(r2_end).epsilon(1e-15));

  // Capture starts inside Mars's sphere of influence; the box still tops out
  // at the SOI itself.
  const auto& ini4 = p.phase_by_id(4).initial_pins;
  REQUIRE(ini4.size() == 1);
  CHECK(ini4[0].state_index == 0);
  CHECK(ini4[0].value == doctest::Approx(r4_start).epsilon(1e-15));
  CHECK(p.phase_by_id(4).x_upper[0] ==
        doctest::Approx(constants.R_M_SOI / constants.R_M).epsilon(1e-15));

  // Out-of-range ratios are rejected.
  ProblemConfig bad = cfg;
  bad.handoff_escape_ratio = 1.6;
  CHECK_THROWS(build_problem(bad, constants));
  bad = cfg;
  bad.handoff_capture_ratio = 0.4;
  CHECK_THROWS(build_problem(bad, constants));
}

TEST_CASE("objective converts endpoint times to heliocentric days") {
  const PhysicalConstants constants = PhysicalConstants::defaults();
  const Problem p = build_problem(ProblemConfig{}, constants);
  CHECK(objective_days(p, 0.0, 0.0) == doctest::Approx(0.0).scale(1.0));
  // One canonical Mars time unit at the capture end adds T_M seconds.
  const double one_tf = objective_days(p, 0.0, 1.0);
  CHECK(one_tf == doctest::Approx(p.scales[3].T / kSecondsPerDay).epsilon(1e-14));
  // One canonical Earth time unit at the transfer start subtracts T_E seconds.
  const double one_t0 = objective_days(p, 1.0, 0.0);
  CHECK(one_t0 == doctest::Approx(-p.scales[1].T / kSecondsPerDay).epsilon(1e-14));
}

TEST_CASE("three-phase variant drops the alignment phase and fixes the phase angle") {
  ProblemConfig cfg;
  cfg.variant = Variant::three_phase_comparison;
  cfg.fixed_phase_angle = 0.9666;
  const Problem p = build_problem(cfg, PhysicalConstants::defaults());
  CHECK(p.phases.size() == 3);
  CHECK(p.phases.front().id == 2);
}

TEST_CASE("invalid configurations are rejected") {
  ProblemConfig cfg;
  cfg.variant = Variant::three_phase_comparison;  // missing fixed_phase_angle
  CHECK_THROWS(cfg.validate());
  ProblemConfig neg;
  neg.a_thrust_si = -1.0;
  CHECK_THROWS(neg.validate());
}
