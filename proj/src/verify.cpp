#include "ares/verify.hpp"

#include <array>
#include <cmath>

#include "ares/propagate.hpp"

namespace ares {

double osculating_eccentricity(double mu, double r, double v_r, double v_theta) {
  const double h = r * v_theta;
  const double a = h * h / (mu * r) - 1.0;
  const double b = h * v_r / mu;
  return std::sqrt(a * a + b * b);
}

namespace {

// Right-hand side of one phase in phase-local time, with the control taken
// from the collocating polynomials.
OdeRhs phase_rhs(const TranscribedNlp& nlp, const PhaseTrajectory& traj, int phase) {
  const PhaseContext& ctx = nlp.problem().phases[phase].ctx;
  const int nx = nlp.layout()[phase].nx;
  const double t0 = traj.t0, dt = traj.tf - traj.t0;
  if (nx == 2) {
    return [ctx](double, const Eigen::VectorXd& x) {
      double dE, dM;
      planet_pair_rates(ctx, x[0], x[1], dE, dM);
      return (Eigen::VectorXd(2) << dE, dM).finished();
    };
  }
  return [&nlp, &traj, ctx, phase, t0, dt](double t, const Eigen::VectorXd& x) {
    const double tau = std::clamp((t - t0) / dt, 0.0, 1.0);
    const Eigen::VectorXd u = nlp.interp_control(traj, phase, tau);
    std::array<double, 6> z{};
    std::array<double, 2> w{u[0], u[1]};
    std::array<double, 6> f{};
    for (int c = 0; c < 6; ++c) z[c] = x[c];
    spacecraft_phase_rhs(ctx, z.data(), w.data(), f.data());
    Eigen::VectorXd dx(6);
    for (int c = 0; c < 6; ++c) dx[c] = f[c];
    return dx;
  };
}

// Eccentricity at phase fraction tau from the collocating polynomials.
double ecc_at(const TranscribedNlp& nlp, const PhaseTrajectory& traj, int phase, double tau) {
  const Eigen::VectorXd s = nlp.interp_state(traj, phase, tau);
  return osculating_eccentricity(1.0, s[0], s[2], s[3]);
}

// Bisection of e(tau) - 1 between two bracketing fractions.
double bisect_unity(const TranscribedNlp& nlp, const PhaseTrajectory& traj, int phase, double lo,
                    double hi, bool rising) {
  for (int it = 0; it < 60 && (hi - lo) > 1e-10; ++it) {
    const double mid = 0.5 * (lo + hi);
    const bool above = ecc_at(nlp, traj, phase, mid) > 1.0;
    if (above == rising)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TrajectoryAudit audit_trajectory(const TranscribedNlp& nlp, const Eigen::VectorXd& x,
                                 int ecc_samples) {
  const Problem& problem = nlp.problem();
  const TrajectoryBundle traj = nlp.unpack(x);
  const Eigen::VectorXd c = nlp.constraints(x);

  TrajectoryAudit a;
  a.phases.resize(problem.phases.size());

  OdeOptions tight;
  tight.rtol = 1e-12;
  tight.atol = 1e-12;

  for (size_t p = 0; p < problem.phases.size(); ++p) {
    const PhaseDefinition& ph = problem.phases[p];
    const PhaseLayout& L = nlp.layout()[p];
    const PhaseTrajectory& tr = traj.phases[p];
    PhaseAudit& pa = a.phases[p];
    pa.phase_id = ph.id;
    pa.duration_canonical = tr.tf - tr.t0;
    pa.duration_days = pa.duration_canonical * problem.scales[ph.id - 1].T / kSecondsPerDay;

    for (int i = 0; i < L.n_col * L.nx; ++i)
      pa.max_defect = std::max(pa.max_defect, std::abs(c[L.defect_offset + i]));

    // Open-loop replay from the initial support state.
    const Eigen::VectorXd x0 = tr.states.row(0);
    const Eigen::VectorXd xf =
        integrate_to(phase_rhs(nlp, tr, static_cast<int>(p)), x0, tr.t0, tr.tf, tight);
    const Eigen::VectorXd xf_col = tr.states.row(tr.states.rows() - 1);
    pa.replay_terminal_error = (xf - xf_col).lpNorm<Eigen::Infinity>();

    if (L.nx == 6) {
      pa.initial_radius = tr.states(0, 0);
      pa.terminal_radius = tr.states(tr.states.rows() - 1, 0);
      pa.initial_ecc = ecc_at(nlp, tr, static_cast<int>(p), 0.0);
      pa.terminal_ecc = ecc_at(nlp, tr, static_cast<int>(p), 1.0);
      pa.ecc_series.reserve(ecc_samples + 1);
      double prev = pa.initial_ecc;
      double prev_tau = 0.0;
      for (int k = 0; k <= ecc_samples; ++k) {
        const double tau = static_cast<double>(k) / ecc_samples;
        const double e = ecc_at(nlp, tr, static_cast<int>(p), tau);
        pa.ecc_series.push_back({tau, e});
        if (k > 0 && !pa.ecc_unity_crossing) {
          if (prev < 1.0 && e >= 1.0)
            pa.ecc_unity_crossing =
                bisect_unity(nlp, tr, static_cast<int>(p), prev_tau, tau, true);
          else if (prev > 1.0 && e <= 1.0)
            pa.ecc_unity_crossing =
                bisect_unity(nlp, tr, static_cast<int>(p), prev_tau, tau, false);
        }
        prev = e;
        prev_tau = tau;
      }
    }

    a.max_defect = std::max(a.max_defect, pa.max_defect);
    a.max_replay_error = std::max(a.max_replay_error, pa.replay_terminal_error);
  }

  a.event_residuals.reserve(nlp.num_event_rows());
  for (int i = 0; i < nlp.num_event_rows(); ++i) {
    const double v = c[nlp.event_offset() + i];
    a.event_residuals.push_back(v);
    a.max_event_residual = std::max(a.max_event_residual, std::abs(v));
  }

  const double t0 = traj.phases[problem.obj_t0_phase].t0;
  const double tf = traj.phases[problem.obj_tf_phase].tf;
  a.transfer_days = objective_days(problem, t0, tf);
  a.alignment_days =
      problem.config.variant == Variant::four_phase ? a.phases[0].duration_days : 0.0;
  return a;
}

nlohmann::json audit_json(const TrajectoryAudit& a) {
  nlohmann::json phases = nlohmann::json::array();
  for (const PhaseAudit& p : a.phases) {
    nlohmann::json ecc = nlohmann::json::array();
    for (const EccSample& s : p.ecc_series) ecc.push_back({s.fraction, s.ecc});
    nlohmann::json jp{{"phase", p.phase_id},
                      {"duration_canonical", p.duration_canonical},
                      {"duration_days", p.duration_days},
                      {"max_defect", p.max_defect},
                      {"replay_terminal_error", p.replay_terminal_error},
                      {"initial_radius", p.initial_radius},
                      {"terminal_radius", p.terminal_radius},
                      {"initial_ecc", p.initial_ecc},
                      {"terminal_ecc", p.terminal_ecc},
                      {"ecc_series", std::move(ecc)}};
    if (p.ecc_unity_crossing) jp["ecc_unity_crossing"] = *p.ecc_unity_crossing;
    phases.push_back(std::move(jp));
  }
  return {{"phases", std::move(phases)},
          {"event_residuals", a.event_residuals},
          {"max_defect", a.max_defect},
          {"max_event_residual", a.max_event_residual},
          {"max_replay_error", a.max_replay_error},
          {"alignment_days", a.alignment_days},
          {"transfer_days", a.transfer_days}};
}

}  // namespace ares
