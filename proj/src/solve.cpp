#include "ares/solve.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "ares/propagate.hpp"

namespace ares {

namespace {

// Guess construction runs without gravity perturbations; downgrade the mode so
// perturbed contexts propagate clean two-body + thrust dynamics.
PhaseContext guess_ctx(PhaseContext ctx) {
  if (ctx.mode == Mode::elliptic_perturbed) ctx.mode = Mode::elliptic;
  return ctx;
}

OdeRhs constant_control_rhs(const PhaseContext& ctx, const Eigen::Vector2d& w) {
  return [ctx, w](double, const Eigen::VectorXd& x) {
    std::array<double, 8> z{};
    std::array<double, 6> f{};
    for (int c = 0; c < 6; ++c) z[c] = x[c];
    z[6] = w[0];
    z[7] = w[1];
    spacecraft_phase_rhs(ctx, z.data(), z.data() + 6, f.data());
    Eigen::VectorXd dx(6);
    for (int c = 0; c < 6; ++c) dx[c] = f[c];
    return dx;
  };
}

OdeRhs planet_rhs(const PhaseContext& ctx) {
  return [ctx](double, const Eigen::VectorXd& x) {
    double dE, dM;
    planet_pair_rates(ctx, x[0], x[1], dE, dM);
    return (Eigen::VectorXd(2) << dE, dM).finished();
  };
}

const OdeOptions& guess_ode() {
  static OdeOptions o = [] {
    OdeOptions v;
    v.rtol = 1e-10;
    v.atol = 1e-10;
    return v;
  }();
  return o;
}

// Integrates the autonomous rhs until component `comp` crosses `threshold`
// (upward or downward); returns the crossing time.
double propagate_until(const OdeRhs& rhs, const Eigen::VectorXd& x0, int comp, double threshold,
                       bool upward, double chunk, double t_max) {
  auto crossed = [&](const Eigen::VectorXd& x) {
    return upward ? x[comp] >= threshold : x[comp] <= threshold;
  };
  Eigen::VectorXd x = x0;
  double t = 0.0;
  while (t < t_max) {
    const Eigen::VectorXd x_next = integrate_to(rhs, x, 0.0, chunk, guess_ode());
    if (crossed(x_next)) {
      double lo = 0.0, hi = chunk;
      for (int it = 0; it < 60 && (hi - lo) > 1e-10 * chunk; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (crossed(integrate_to(rhs, x, 0.0, mid, guess_ode())))
          hi = mid;
        else
          lo = mid;
      }
      return t + hi;
    }
    x = x_next;
    t += chunk;
  }
  throw std::runtime_error("guess propagation never reached its target radius");
}

// States of the autonomous rhs at the given fractions of [0, T].
Eigen::MatrixXd sample_states(const OdeRhs& rhs, const Eigen::VectorXd& x0, double T,
                              const std::vector<double>& fractions) {
  std::vector<double> times;
  times.reserve(fractions.size());
  for (double f : fractions) times.push_back(f * T);
  const std::vector<Eigen::VectorXd> xs = integrate_at(rhs, x0, 0.0, times, guess_ode());
  Eigen::MatrixXd out(static_cast<int>(xs.size()), x0.size());
  for (size_t i = 0; i < xs.size(); ++i) out.row(static_cast<int>(i)) = xs[i].transpose();
  return out;
}

// Planet longitudes integrated in the given context's units.
Eigen::MatrixXd sample_longitudes(const PhaseContext& ctx, double L_E0, double L_M0, double T,
                                  const std::vector<double>& fractions) {
  Eigen::VectorXd x0(2);
  x0 << L_E0, L_M0;
  return sample_states(planet_rhs(ctx), x0, T, fractions);
}

struct StageResult {
  double duration = 0.0;
  Eigen::MatrixXd states;    // support points x 6 (stage state layout)
  Eigen::MatrixXd controls;  // collocation points x 2
  bool solved = false;
};

// Feasible outward-spiral seed: tangential thrust from a circular orbit at r0
// until the radius crosses r_target.  Pins at both ends hold exactly.
StageResult seed_spiral_out(const PhaseContext& ctx, double r0, double r_target,
                            const std::vector<double>& support_fractions, int n_col,
                            double chunk) {
  const OdeRhs rhs = constant_control_rhs(ctx, Eigen::Vector2d(0.0, 1.0));
  Eigen::VectorXd x0(6);
  x0 << r0, 0.0, 0.0, std::sqrt(1.0 / r0), 0.0, 0.0;
  StageResult res;
  res.duration = propagate_until(rhs, x0, 0, r_target, true, chunk, 4000.0 * chunk);
  res.states = sample_states(rhs, x0, res.duration, support_fractions);
  res.controls = Eigen::Vector2d(0.0, 1.0).transpose().replicate(n_col, 1);
  return res;
}

// Feasible capture seed by time reversal of an escape spiral: under
// t -> T - t, theta -> -theta, v_r -> -v_r, w_theta -> -w_theta the dynamics
// are invariant, so the reflected outward spiral from the parking orbit is an
// exact inward capture ending on the parking pins.
StageResult seed_capture(const PhaseContext& ctx, double r_park, double r_soi,
                         const std::vector<double>& support_fractions, int n_col, double chunk) {
  const OdeRhs rhs = constant_control_rhs(ctx, Eigen::Vector2d(0.0, 1.0));
  Eigen::VectorXd x0(6);
  x0 << r_park, 0.0, 0.0, std::sqrt(1.0 / r_park), 0.0, 0.0;
  StageResult res;
  res.duration = propagate_until(rhs, x0, 0, r_soi, true, chunk, 4000.0 * chunk);

  // Escape states at reversed fractions, then reflect.
  std::vector<double> rev(support_fractions.size());
  for (size_t i = 0; i < rev.size(); ++i)
    rev[i] = 1.0 - support_fractions[support_fractions.size() - 1 - i];
  const Eigen::MatrixXd esc = sample_states(rhs, x0, res.duration, rev);
  const int n = static_cast<int>(support_fractions.size());
  res.states.resize(n, 6);
  for (int i = 0; i < n; ++i) {
    const Eigen::VectorXd row = esc.row(n - 1 - i);
    res.states(i, 0) = row[0];
    res.states(i, 1) = -row[1];
    res.states(i, 2) = -row[2];
    res.states(i, 3) = row[3];
    res.states(i, 4) = 0.0;
    res.states(i, 5) = 0.0;
  }
  res.controls = Eigen::Vector2d(0.0, -1.0).transpose().replicate(n_col, 1);
  return res;
}

// Minimum-time single-phase problem built around one phase of the parent,
// with fully pinned initial state and the given final pins.
StageResult solve_stage(const Problem& parent, int phase_index, const PhaseMesh& pm,
                        const Eigen::VectorXd& x_start, const std::vector<BoundaryPin>& final_pins,
                        const Eigen::Vector2d& seed_control, int stop_comp, double stop_value,
                        bool stop_upward, double chunk, const SolveOptions& opts) {
  const PhaseDefinition& parent_ph = parent.phases[phase_index];

  Problem sp;
  sp.config = parent.config;
  sp.constants = parent.constants;
  sp.scales = parent.scales;
  PhaseDefinition ph = parent_ph;
  ph.ctx = guess_ctx(ph.ctx);
  ph.t0_fixed = 0.0;
  ph.initial_pins.clear();
  for (int c = 0; c < 6; ++c) ph.initial_pins.push_back({c, x_start[c]});
  ph.final_pins = final_pins;
  sp.phases = {ph};
  sp.obj_t0_phase = 0;
  sp.obj_tf_phase = 0;
  sp.t0_factor = 1.0;
  sp.tf_factor = 1.0;

  Mesh mesh;
  mesh.phases = {pm};
  TranscribedNlp nlp(sp, mesh);

  // Seed: constant-control propagation until the stop condition.
  const OdeRhs rhs = constant_control_rhs(ph.ctx, seed_control);
  StageResult res;
  res.duration = propagate_until(rhs, x_start, stop_comp, stop_value, stop_upward, chunk,
                                 4000.0 * chunk);
  res.states = sample_states(rhs, x_start, res.duration, nlp.support_fractions(0));
  const int n_col = pm.n_collocation();
  res.controls = seed_control.transpose().replicate(n_col, 1);

  TrajectoryBundle seed;
  seed.phases.resize(1);
  seed.phases[0].t0 = 0.0;
  seed.phases[0].tf = res.duration;
  seed.phases[0].states = res.states;
  seed.phases[0].controls = res.controls;

  const NlpSolution s = solve_nlp(nlp, nlp.pack(seed), opts.stage_nlp);
  if (opts.verbose)
    std::printf("  stage phase %d: %s, T = %.6g, viol = %.2e\n", parent_ph.id,
                to_string(s.status).c_str(), s.x.size() ? s.x[1] - s.x[0] : 0.0,
                s.max_violation);
  if (s.status == NlpStatus::optimal ||
      (s.status == NlpStatus::feasible_suboptimal && s.max_violation <= 1e-6)) {
    const TrajectoryBundle out = nlp.unpack(s.x);
    res.duration = out.phases[0].tf - out.phases[0].t0;
    res.states = out.phases[0].states;
    res.controls = out.phases[0].controls;
    res.solved = true;
  }
  return res;
}

// Phase-alignment duration guess: first time the Mars-Earth longitude gap
// reaches `target` (mod 2*pi), using circular mean motions.
double alignment_duration_guess(const Problem& prob, double target) {
  const double a_M = prob.constants.R_SM / prob.constants.R_SE;
  const double n_E = 1.0;
  const double n_M = std::sqrt(1.0 / (a_M * a_M * a_M));
  const double dn = n_M - n_E;  // negative
  const double delta0 = prob.config.L_M0 - prob.config.L_E0;
  for (int k = 0; k < 16; ++k) {
    const double t = (target - delta0 - 2.0 * kPi * k) / dn;
    if (t > 0.5) return t;
  }
  throw std::runtime_error("no alignment epoch found");
}

}  // namespace

TrajectoryBundle build_guess(const Problem& problem, const TranscribedNlp& nlp,
                             const SolveOptions& opts) {
  const bool four_phase = problem.config.variant == Variant::four_phase;
  const int off = four_phase ? 1 : 0;
  const PhysicalConstants& c = problem.constants;
  const bool perturbed = problem.config.mode == Mode::elliptic_perturbed;
  const double r_soi_E = (perturbed ? problem.config.handoff_escape_ratio : 1.0) *
                         c.R_E_SOI / c.R_E;
  const double r_soi_M = (perturbed ? problem.config.handoff_capture_ratio : 1.0) *
                         c.R_M_SOI / c.R_M;
  const double a_M = c.R_SM / c.R_SE;
  const ConversionFactors e2h = conversion(problem.scales[1], problem.scales[0]);
  const ConversionFactors m2h = conversion(problem.scales[3], problem.scales[0]);

  TrajectoryBundle bundle;
  bundle.phases.resize(problem.phases.size());

  // ---- Alignment phase and the longitudes at transfer start.
  double t02 = 0.0;       // phase-2 initial time (phase-2 canonical, == tf1)
  double L_E2 = 0.0, L_M2 = 0.0;  // longitudes at transfer start
  if (four_phase) {
    const double d1 = alignment_duration_guess(problem, 0.9666);
    const std::vector<double> sf = nlp.support_fractions(0);
    const Eigen::MatrixXd Ls = sample_longitudes(problem.phases[0].ctx, problem.config.L_E0,
                                                 problem.config.L_M0, d1, sf);
    bundle.phases[0].t0 = 0.0;
    bundle.phases[0].tf = d1;
    bundle.phases[0].states = Ls;
    bundle.phases[0].controls.resize(nlp.layout()[0].n_col, 0);
    t02 = d1;  // the junction equates the raw time values
    L_E2 = Ls(Ls.rows() - 1, 0);
    L_M2 = Ls(Ls.rows() - 1, 1);
  } else {
    L_E2 = problem.config.L_E0;
    L_M2 = problem.config.L_E0 + problem.config.fixed_phase_angle.value();
  }

  // ---- Phase 2: Earth escape spiral (feasible tangential-thrust seed; the
  // full solve shortens it).
  const PhaseDefinition& ph2 = problem.phases[off];
  const StageResult st2 =
      seed_spiral_out(guess_ctx(ph2.ctx), problem.config.r_park_E, r_soi_E,
                      nlp.support_fractions(off), nlp.layout()[off].n_col, 200.0);
  {
    PhaseTrajectory& tr = bundle.phases[off];
    tr.t0 = t02;
    tr.tf = t02 + st2.duration;
    tr.states = st2.states;
    tr.controls = st2.controls;
    // Longitudes evolve with the phase-2 clock regardless of the stage pins.
    const Eigen::MatrixXd Ls = sample_longitudes(guess_ctx(ph2.ctx), L_E2, L_M2, st2.duration,
                                                 nlp.support_fractions(off));
    tr.states.col(4) = Ls.col(0);
    tr.states.col(5) = Ls.col(1);
  }

  // ---- Transform the escape terminus into heliocentric coordinates.
  const Eigen::VectorXd end2 = bundle.phases[off].states.row(bundle.phases[off].states.rows() - 1);
  const PlanetModel& earth3 = problem.phases[off + 1].ctx.earth;
  const double L_E_end2 = end2[4], L_M_end2 = end2[5];
  PlanetKinematics earth_kin;
  earth_kin.L = L_E_end2;
  earth_kin.R = planet_radius(earth3, L_E_end2);
  earth_kin.L_dot = true_longitude_rate(earth3, L_E_end2);
  earth_kin.R_dot = planet_radius_rate(earth3, L_E_end2, earth_kin.L_dot);
  SpacecraftState local2{end2[0] * e2h.D_ratio, end2[1], end2[2] * e2h.V_ratio,
                         end2[3] * e2h.V_ratio};
  const HelioState h3 = planet_to_helio(earth_kin, local2, L_E_end2);

  // ---- Phase 3: heliocentric raising leg.
  const int p3 = off + 1;
  Eigen::VectorXd x3_start(6);
  x3_start << 1.0, 0.0, 0.0, 1.0, 0.0, 0.0;
  const StageResult st3 = solve_stage(
      problem, p3, nlp.mesh().phases[p3], x3_start,
      {{0, a_M}, {2, 0.0}, {3, std::sqrt(1.0 / a_M)}}, Eigen::Vector2d(0.0, 1.0), 0, a_M, true,
      0.25, opts);
  const double t03 = bundle.phases[off].tf * e2h.T_ratio;
  double L_E3f, L_M3f, theta3f;
  {
    PhaseTrajectory& tr = bundle.phases[p3];
    tr.t0 = t03;
    tr.tf = t03 + st3.duration;
    tr.states = st3.states;
    tr.controls = st3.controls;
    const double dtheta = h3.phi - st3.states(0, 1);
    tr.states.col(1).array() += dtheta;
    // Blend the pinned stage start onto the transformed junction state.
    tr.states(0, 0) = h3.rho;
    tr.states(0, 2) = h3.v_rho;
    tr.states(0, 3) = h3.v_phi;
    const Eigen::MatrixXd Ls = sample_longitudes(guess_ctx(problem.phases[p3].ctx), L_E_end2,
                                                 L_M_end2, st3.duration,
                                                 nlp.support_fractions(p3));
    tr.states.col(4) = Ls.col(0);
    tr.states.col(5) = Ls.col(1);
    L_E3f = Ls(Ls.rows() - 1, 0);
    L_M3f = Ls(Ls.rows() - 1, 1);
    theta3f = tr.states(tr.states.rows() - 1, 1);
  }

  // ---- Phase 4: Mars capture spiral (time-reversed escape seed, feasible and
  // ending exactly on the parking pins).
  const int p4 = off + 2;
  const StageResult st4 =
      seed_capture(guess_ctx(problem.phases[p4].ctx), problem.config.r_park_M, r_soi_M,
                   nlp.support_fractions(p4), nlp.layout()[p4].n_col, 200.0);
  {
    PhaseTrajectory& tr = bundle.phases[p4];
    const double t04 = bundle.phases[p3].tf / m2h.T_ratio;
    tr.t0 = t04;
    tr.tf = t04 + st4.duration;
    tr.states = st4.states;
    tr.controls = st4.controls;
    const double dtheta = theta3f - st4.states(0, 1);
    tr.states.col(1).array() += dtheta;
    const Eigen::MatrixXd Ls = sample_longitudes(guess_ctx(problem.phases[p4].ctx), L_E3f, L_M3f,
                                                 st4.duration, nlp.support_fractions(p4));
    tr.states.col(4) = Ls.col(0);
    tr.states.col(5) = Ls.col(1);
  }
  return bundle;
}

namespace {

bool usable_outcome(const NlpSolution& s) {
  return s.status == NlpStatus::optimal ||
         (s.status == NlpStatus::feasible_suboptimal && s.max_violation <= 1e-6);
}

// `warm_mu` > 0 caps the barrier start of the first pass (warm continuation);
// refinement passes always resume with opts.mu_warm.
SolveOutcome solve_on_mesh(const Problem& problem, Mesh mesh, Eigen::VectorXd x,
                           const SolveOptions& opts, double warm_mu) {
  SolveOutcome out;
  out.config = problem.config;
  bool have_good = false;
  SolveOutcome good;  // last pass that converged; the fallback if a finer one fails
  for (int pass = 0; pass <= opts.max_refinements; ++pass) {
    TranscribedNlp nlp(problem, mesh);
    NlpOptions nlp_opts = opts.nlp;
    // Refinement passes (and warm continuation starts) resume near a solved
    // point; restarting the barrier at its cold value would push the iterate
    // far off the active set and waste most of the budget coming back.
    if (pass > 0)
      nlp_opts.mu_init = std::min(nlp_opts.mu_init, opts.mu_warm);
    else if (warm_mu > 0.0)
      nlp_opts.mu_init = std::min(nlp_opts.mu_init, warm_mu);
    out.nlp = solve_nlp(nlp, x, nlp_opts);
    out.mesh = mesh;
    if (opts.verbose)
      std::printf("solve pass %d: %s in %d iters, viol %.2e, f %.8g\n", pass,
                  to_string(out.nlp.status).c_str(), out.nlp.iterations, out.nlp.max_violation,
                  out.nlp.objective);
    if (!usable_outcome(out.nlp)) {
      if (have_good) out = good;  // keep the coarser converged answer
      break;
    }
    x = out.nlp.x;
    good = out;
    have_good = true;
    if (pass == opts.max_refinements) break;
    const RefinementReport rep = refine_mesh(nlp, x, opts.mesh_tol);
    if (opts.verbose)
      std::printf("  mesh check: max err %.3e%s\n", rep.max_error,
                  rep.changed ? ", refining" : "");
    if (!rep.changed) break;
    TranscribedNlp fine(problem, rep.mesh);
    x = resample(nlp, x, fine);
    mesh = rep.mesh;
  }
  TranscribedNlp nlp(problem, out.mesh);
  out.trajectory = nlp.unpack(out.nlp.x);
  fill_report_times(problem, out);
  return out;
}

}  // namespace

SolveOutcome solve_problem(const Problem& problem, const SolveOptions& opts) {
  Mesh mesh = default_mesh(problem);
  if (opts.mesh_degree || opts.mesh_segments) {
    for (size_t p = 0; p < mesh.phases.size(); ++p) {
      const int degree = opts.mesh_degree.value_or(mesh.phases[p].segments.front().degree);
      const int segments = opts.mesh_segments
                               ? (*opts.mesh_segments)[p]
                               : static_cast<int>(mesh.phases[p].segments.size());
      mesh.phases[p] = uniform_phase_mesh(segments, degree);
    }
  }
  TranscribedNlp nlp(problem, mesh);
  const TrajectoryBundle guess = build_guess(problem, nlp, opts);
  return solve_on_mesh(problem, mesh, nlp.pack(guess), opts, /*warm_mu=*/-1.0);
}

void fill_report_times(const Problem& problem, SolveOutcome& outcome) {
  outcome.phase_days.clear();
  for (size_t p = 0; p < problem.phases.size(); ++p) {
    const PhaseTrajectory& tr = outcome.trajectory.phases[p];
    const double T_unit = problem.scales[problem.phases[p].id - 1].T;
    outcome.phase_days.push_back((tr.tf - tr.t0) * T_unit / kSecondsPerDay);
  }
  const double t0 = outcome.trajectory.phases[problem.obj_t0_phase].t0;
  const double tf = outcome.trajectory.phases[problem.obj_tf_phase].tf;
  outcome.transfer_days = objective_days(problem, t0, tf);
  outcome.alignment_days =
      problem.config.variant == Variant::four_phase ? outcome.phase_days[0] : 0.0;
}

SolveOutcome TransferSolver::solve(const ProblemConfig& config) {
  const std::tuple<int, int, double> full_key{static_cast<int>(config.variant),
                                              static_cast<int>(config.mode), config.a_thrust_si};
  if (auto done = results_.find(full_key); done != results_.end()) return done->second;

  const Problem problem = build_problem(config, constants_);
  const std::pair<int, int> key{static_cast<int>(config.variant), static_cast<int>(config.mode)};

  // Warm starts help across neighboring thrust levels of the same mode.
  // Across fidelity modes they do not: the lower-mode solution sits far enough
  // outside the new feasible set that the warm solve either stalls or lands on
  // a worse local solution, so each mode starts from its own staged guess.
  auto it = cache_.find(key);
  SolveOutcome outcome;
  bool warm_attempted = false;
  if (it != cache_.end()) {
    warm_attempted = true;
    outcome = solve_with_start(problem, it->second.mesh, it->second.x, opts_.mu_warm);
  } else {
    outcome = solve_problem(problem, opts_);
  }

  auto usable = [](const SolveOutcome& o) {
    return o.nlp.status == NlpStatus::optimal ||
           (o.nlp.status == NlpStatus::feasible_suboptimal && o.nlp.max_violation <= 1e-6);
  };
  if (!usable(outcome) && warm_attempted) {
    // Warm start walked into an infeasible corner; retry from scratch.
    if (opts_.verbose) std::printf("warm start failed; retrying cold\n");
    outcome = solve_problem(problem, opts_);
  }
  if (usable(outcome)) {
    cache_[key] = {outcome.mesh, outcome.nlp.x, config.a_thrust_si};
    results_[full_key] = outcome;
  }
  return outcome;
}

SolveOutcome TransferSolver::solve_with_start(const Problem& problem, const Mesh& mesh,
                                              const Eigen::VectorXd& x0, double warm_mu) {
  // The cached mesh may differ from the default; reuse it as-is so the warm
  // start stays aligned with the decision vector.
  return solve_on_mesh(problem, mesh, x0, opts_, warm_mu);
}

}  // namespace ares
