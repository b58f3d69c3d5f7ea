#include "ares/cli.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"

namespace ares {

namespace {

[[noreturn]] void config_error(const std::string& msg) {
  throw std::invalid_argument("config error: " + msg);
}

void reject_unknown(const nlohmann::json& obj, const std::set<std::string>& allowed,
                    const std::string& where) {
  for (const auto& [key, value] : obj.items())
    if (!allowed.count(key)) config_error("unknown key \"" + key + "\" in " + where);
}

double positive(const nlohmann::json& v, const std::string& name) {
  const double x = v.get<double>();
  if (!(x > 0.0)) config_error("\"" + name + "\" must be positive");
  return x;
}

std::string fmt(const char* format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, v);
  return buf;
}

std::chrono::year_month_day parse_epoch(const std::string& epoch) {
  int y = 0, mo = 0, d = 0;
  if (std::sscanf(epoch.c_str(), "%d-%d-%d", &y, &mo, &d) != 3)
    config_error("epoch must be an ISO date (YYYY-MM-DD): \"" + epoch + "\"");
  const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{unsigned(mo)},
                                        std::chrono::day{unsigned(d)}};
  if (!ymd.ok()) config_error("invalid epoch date \"" + epoch + "\"");
  return ymd;
}

std::chrono::year_month_day date_after(const std::string& epoch, double days) {
  const auto start = std::chrono::sys_days{parse_epoch(epoch)};
  const auto whole = static_cast<long>(std::floor(days));
  return std::chrono::year_month_day{start + std::chrono::days{whole}};
}

bool case_usable(const NlpSolution& s) {
  return (s.status == NlpStatus::optimal || s.status == NlpStatus::feasible_suboptimal) &&
         s.max_violation <= 1e-6;
}

}  // namespace

RunConfig parse_run_config(const nlohmann::json& doc) {
  if (!doc.is_object()) config_error("top level must be an object");
  reject_unknown(doc,
                 {"schema_version", "mode", "variant", "a_thrust", "epoch", "phase_angle",
                  "L_E0_deg", "L_M0_deg", "e_E", "e_M", "r_park_E", "r_park_M",
                  "relax_capture_vr", "handoff_escape_ratio", "handoff_capture_ratio",
                  "constants", "mesh", "solver", "output_dir"},
                 "config");
  if (!doc.contains("schema_version")) config_error("missing \"schema_version\"");
  if (doc.at("schema_version").get<int>() != 1)
    config_error("unsupported \"schema_version\" (expected 1)");

  RunConfig cfg;
  if (doc.contains("mode")) cfg.mode = mode_from_string(doc.at("mode").get<std::string>());
  if (doc.contains("variant"))
    cfg.variant = variant_from_string(doc.at("variant").get<std::string>());

  if (!doc.contains("a_thrust")) config_error("missing \"a_thrust\"");
  for (const nlohmann::json& v : doc.at("a_thrust"))
    cfg.a_thrust.push_back(positive(v, "a_thrust"));
  if (cfg.a_thrust.empty()) config_error("\"a_thrust\" must list at least one value");

  if (doc.contains("epoch")) cfg.epoch_utc = doc.at("epoch").get<std::string>();
  parse_epoch(cfg.epoch_utc);  // validate

  if (doc.contains("phase_angle")) cfg.phase_angle = doc.at("phase_angle").get<double>();
  if (cfg.variant == Variant::three_phase_comparison && !cfg.phase_angle)
    config_error("variant \"three_phase_comparison\" requires \"phase_angle\"");
  if (cfg.variant == Variant::four_phase && cfg.phase_angle)
    config_error("\"phase_angle\" only applies to variant \"three_phase_comparison\"");

  if (doc.contains("constants")) {
    const nlohmann::json& c = doc.at("constants");
    reject_unknown(c,
                   {"R_E", "R_M", "R_E_SOI", "R_M_SOI", "R_SE", "R_SM", "mu_E", "mu_S", "mu_M",
                    "varpi_E_deg", "varpi_M_deg"},
                   "\"constants\"");
    PhysicalConstants& pc = cfg.constants;
    if (c.contains("R_E")) pc.R_E = positive(c.at("R_E"), "R_E");
    if (c.contains("R_M")) pc.R_M = positive(c.at("R_M"), "R_M");
    if (c.contains("R_E_SOI")) pc.R_E_SOI = positive(c.at("R_E_SOI"), "R_E_SOI");
    if (c.contains("R_M_SOI")) pc.R_M_SOI = positive(c.at("R_M_SOI"), "R_M_SOI");
    if (c.contains("R_SE")) pc.R_SE = positive(c.at("R_SE"), "R_SE");
    if (c.contains("R_SM")) pc.R_SM = positive(c.at("R_SM"), "R_SM");
    if (c.contains("mu_E")) pc.mu_E = positive(c.at("mu_E"), "mu_E");
    if (c.contains("mu_S")) pc.mu_S = positive(c.at("mu_S"), "mu_S");
    if (c.contains("mu_M")) pc.mu_M = positive(c.at("mu_M"), "mu_M");
    if (c.contains("varpi_E_deg")) pc.varpi_E = deg2rad(c.at("varpi_E_deg").get<double>());
    if (c.contains("varpi_M_deg")) pc.varpi_M = deg2rad(c.at("varpi_M_deg").get<double>());
    pc.validate();
  }

  if (doc.contains("mesh")) {
    const nlohmann::json& m = doc.at("mesh");
    reject_unknown(m, {"degree", "segments"}, "\"mesh\"");
    if (m.contains("degree")) {
      cfg.mesh_degree = m.at("degree").get<int>();
      if (*cfg.mesh_degree < 2) config_error("\"degree\" must be at least 2");
    }
    if (m.contains("segments")) {
      std::vector<int> segs;
      for (const nlohmann::json& v : m.at("segments")) {
        segs.push_back(v.get<int>());
        if (segs.back() < 1) config_error("\"segments\" entries must be positive");
      }
      const size_t want = cfg.variant == Variant::four_phase ? 4 : 3;
      if (segs.size() != want)
        config_error("\"segments\" must list one count per phase (" + std::to_string(want) + ")");
      cfg.mesh_segments = std::move(segs);
    }
  }

  if (doc.contains("solver")) {
    const nlohmann::json& s = doc.at("solver");
    reject_unknown(s, {"feas_tol", "opt_tol", "max_iter"}, "\"solver\"");
    if (s.contains("feas_tol")) cfg.solver.feas_tol = positive(s.at("feas_tol"), "feas_tol");
    if (s.contains("opt_tol")) cfg.solver.opt_tol = positive(s.at("opt_tol"), "opt_tol");
    if (s.contains("max_iter")) {
      cfg.solver.max_iter = s.at("max_iter").get<int>();
      if (cfg.solver.max_iter < 1) config_error("\"max_iter\" must be positive");
    }
  }

  if (doc.contains("output_dir")) cfg.output_dir = doc.at("output_dir").get<std::string>();

  cfg.base.mode = cfg.mode;
  cfg.base.variant = cfg.variant;
  cfg.base.epoch_utc = cfg.epoch_utc;
  cfg.base.fixed_phase_angle = cfg.phase_angle;
  if (doc.contains("L_E0_deg")) cfg.base.L_E0 = deg2rad(doc.at("L_E0_deg").get<double>());
  if (doc.contains("L_M0_deg")) cfg.base.L_M0 = deg2rad(doc.at("L_M0_deg").get<double>());
  if (doc.contains("e_E")) cfg.base.e_E = doc.at("e_E").get<double>();
  if (doc.contains("e_M")) cfg.base.e_M = doc.at("e_M").get<double>();
  if (doc.contains("r_park_E")) cfg.base.r_park_E = positive(doc.at("r_park_E"), "r_park_E");
  if (doc.contains("r_park_M")) cfg.base.r_park_M = positive(doc.at("r_park_M"), "r_park_M");
  if (doc.contains("relax_capture_vr"))
    cfg.base.relax_phase4_vr = doc.at("relax_capture_vr").get<bool>();
  if (doc.contains("handoff_escape_ratio"))
    cfg.base.handoff_escape_ratio = doc.at("handoff_escape_ratio").get<double>();
  if (doc.contains("handoff_capture_ratio"))
    cfg.base.handoff_capture_ratio = doc.at("handoff_capture_ratio").get<double>();
  cfg.base.validate();
  return cfg;
}

std::string start_date(const std::string& epoch_utc, double days) {
  static const char* kMonths[] = {"January", "February", "March",     "April",   "May",
                                  "June",    "July",     "August",    "September",
                                  "October", "November", "December"};
  const auto ymd = date_after(epoch_utc, days);
  std::ostringstream os;
  os << unsigned(ymd.day()) << ' ' << kMonths[unsigned(ymd.month()) - 1] << ' '
     << int(ymd.year());
  return os.str();
}

std::string start_date_iso(const std::string& epoch_utc, double days) {
  const auto ymd = date_after(epoch_utc, days);
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", int(ymd.year()), unsigned(ymd.month()),
                unsigned(ymd.day()));
  return buf;
}

std::string case_label(double a_thrust_si) { return fmt("%.4e", a_thrust_si); }

std::string trajectory_csv(const TranscribedNlp& nlp, const Eigen::VectorXd& x,
                           int samples_per_phase) {
  const Problem& problem = nlp.problem();
  const TrajectoryBundle traj = nlp.unpack(x);
  std::ostringstream os;
  os << "t_canonical,t_days,phase,r,theta,v_r,v_theta,w_r,w_theta,L_E,L_M,ecc\n";
  for (size_t p = 0; p < problem.phases.size(); ++p) {
    const PhaseDefinition& ph = problem.phases[p];
    const PhaseTrajectory& tr = traj.phases[p];
    const double T_days = problem.scales[ph.id - 1].T / kSecondsPerDay;
    for (int k = 0; k <= samples_per_phase; ++k) {
      const double tau = static_cast<double>(k) / samples_per_phase;
      const double t = tr.t0 + tau * (tr.tf - tr.t0);
      const Eigen::VectorXd s = nlp.interp_state(tr, static_cast<int>(p), tau);
      double r = 0, theta = 0, vr = 0, vt = 0, LE = 0, LM = 0, wr = 0, wt = 0, ecc = 0;
      if (ph.nx == 2) {
        LE = s[0];
        LM = s[1];
      } else {
        r = s[0];
        theta = s[1];
        vr = s[2];
        vt = s[3];
        LE = s[4];
        LM = s[5];
        const Eigen::VectorXd u = nlp.interp_control(tr, static_cast<int>(p), tau);
        wr = u[0];
        wt = u[1];
        ecc = osculating_eccentricity(1.0, r, vr, vt);
      }
      os << fmt("%.17g", t) << ',' << fmt("%.17g", t * T_days) << ',' << ph.id << ','
         << fmt("%.17g", r) << ',' << fmt("%.17g", theta) << ',' << fmt("%.17g", vr) << ','
         << fmt("%.17g", vt) << ',' << fmt("%.17g", wr) << ',' << fmt("%.17g", wt) << ','
         << fmt("%.17g", LE) << ',' << fmt("%.17g", LM) << ',' << fmt("%.17g", ecc) << '\n';
    }
  }
  return os.str();
}

std::string summary_csv(const std::vector<ReportRow>& rows) {
  std::ostringstream os;
  os << "a_thrust,phase1_d,phase2_d,phase3_d,phase4_d,transfer_d,start_date,status,"
        "max_violation,fallback\n";
  for (const ReportRow& r : rows) {
    os << fmt("%.17g", r.a_thrust_si);
    double phases[4] = {0, 0, 0, 0};
    const size_t shift = 4 - r.phase_days.size();  // three-phase rows skip phase 1
    for (size_t i = 0; i < r.phase_days.size(); ++i) phases[shift + i] = r.phase_days[i];
    for (double d : phases) os << ',' << fmt("%.17g", d);
    os << ',' << fmt("%.17g", r.transfer_days);
    os << ',' << r.start_date_iso << ',' << r.status << ',' << fmt("%.17g", r.max_violation)
       << ',' << (r.fallback ? 1 : 0) << '\n';
  }
  return os.str();
}

std::string summary_table(const std::vector<ReportRow>& rows) {
  std::ostringstream os;
  os << "a (m/s^2)    Phase 1 (d)  Phase 2 (d)  Phase 3 (d)  Phase 4 (d)  Transfer (d)  "
        "Start Date\n";
  int fallbacks = 0;
  for (const ReportRow& r : rows) {
    double phases[4] = {0, 0, 0, 0};
    const size_t shift = 4 - r.phase_days.size();
    for (size_t i = 0; i < r.phase_days.size(); ++i) phases[shift + i] = r.phase_days[i];
    os << fmt("%-12.6g", r.a_thrust_si);
    for (double d : phases) os << ' ' << fmt("%-12.6g", d);
    os << ' ' << fmt("%-13.6g", r.transfer_days) << ' ' << r.start_date;
    if (r.fallback) {
      os << "  [fallback]";
      ++fallbacks;
    }
    os << '\n';
  }
  if (fallbacks > 0)
    os << "note: " << fallbacks
       << " case(s) reported under the fallback clause: feasible to <= 1e-6 constraint "
          "violation but optimality not certified.\n";
  return os.str();
}

RunResult run_cases(const RunConfig& cfg, const RunFlags& flags) {
  namespace fs = std::filesystem;
  const fs::path out_dir = flags.out_dir.empty() ? cfg.output_dir : flags.out_dir;
  fs::create_directories(out_dir);

  SolveOptions sopts;
  sopts.nlp = cfg.solver;
  sopts.mesh_degree = cfg.mesh_degree;
  sopts.mesh_segments = cfg.mesh_segments;
  sopts.verbose = flags.verbose;
  sopts.nlp.verbose = flags.verbose;
  TransferSolver solver(cfg.constants, sopts);

  RunResult result;
  for (double a : cfg.a_thrust) {
    const std::string label = case_label(a);
    if (!flags.case_filter.empty() && label.find(flags.case_filter) == std::string::npos)
      continue;

    ProblemConfig pc = cfg.base;
    pc.a_thrust_si = a;
    if (flags.verbose) std::printf("case %s: solving\n", label.c_str());
    SolveOutcome outcome = solver.solve(pc);

    const Problem problem = build_problem(pc, cfg.constants);
    TranscribedNlp nlp(problem, outcome.mesh);
    const TrajectoryAudit audit = audit_trajectory(nlp, outcome.nlp.x);

    ReportRow row;
    row.a_thrust_si = a;
    for (const PhaseAudit& pa : audit.phases) row.phase_days.push_back(pa.duration_days);
    row.transfer_days = audit.transfer_days;
    row.start_date = start_date(cfg.epoch_utc, audit.alignment_days);
    row.start_date_iso = start_date_iso(cfg.epoch_utc, audit.alignment_days);
    row.status = to_string(outcome.nlp.status);
    row.max_violation = outcome.nlp.max_violation;
    row.fallback = case_usable(outcome.nlp) && outcome.nlp.status != NlpStatus::optimal;
    if (!case_usable(outcome.nlp)) result.all_usable = false;
    result.rows.push_back(row);

    SolutionBundle bundle;
    bundle.config = pc;
    bundle.constants = cfg.constants;
    bundle.mesh = outcome.mesh;
    bundle.trajectory = outcome.trajectory;
    bundle.status = row.status;
    bundle.objective_days = outcome.transfer_days;
    bundle.max_violation = outcome.nlp.max_violation;
    bundle.iterations = outcome.nlp.iterations;

    const std::string stem = (out_dir / ("case_" + label)).string();
    std::ofstream(stem + ".solution.json") << solution_to_json(bundle).dump(2) << '\n';
    std::ofstream(stem + ".traj.csv") << trajectory_csv(nlp, outcome.nlp.x);
    std::ofstream(stem + ".audit.json") << audit_json(audit).dump(2) << '\n';
    if (flags.emit_plot_data) {
      std::ofstream ecc(stem + ".ecc.csv");
      ecc << "phase,fraction,ecc\n";
      for (const PhaseAudit& pa : audit.phases)
        for (const EccSample& es : pa.ecc_series)
          ecc << pa.phase_id << ',' << fmt("%.17g", es.fraction) << ',' << fmt("%.17g", es.ecc)
              << '\n';
    }
  }

  std::ofstream(out_dir / "summary.csv") << summary_csv(result.rows);
  return result;
}

nlohmann::json verify_solution_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read solution file: " + path);
  nlohmann::json doc;
  in >> doc;
  const SolutionBundle s = solution_from_json(doc);
  const Problem problem = build_problem(s.config, s.constants);
  TranscribedNlp nlp(problem, s.mesh);
  SolutionBundle mutable_s = s;
  const Eigen::VectorXd x = mutable_s.pack(nlp);
  return audit_json(audit_trajectory(nlp, x));
}

int cli_main(int argc, char** argv) {
  CLI::App app{"Multi-phase minimum-time low-thrust Earth-to-Mars transfer solver"};
  app.require_subcommand(0, 1);

  std::string verify_path;
  app.add_option("--verify-only", verify_path,
                 "Re-audit a stored case_*.solution.json file and print the audit JSON");

  CLI::App* run = app.add_subcommand("run", "Solve the cases of a run configuration");
  std::string config_path;
  RunFlags flags;
  run->add_option("config", config_path, "Run configuration JSON file")->required();
  run->add_option("--out", flags.out_dir, "Output directory (overrides the config)");
  run->add_option("--cases", flags.case_filter, "Only run cases whose label contains this text");
  run->add_flag("--emit-plot-data", flags.emit_plot_data,
                "Also write per-case eccentricity series CSVs");
  run->add_flag("-v,--verbose", flags.verbose, "Print solver progress");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (!verify_path.empty()) {
      std::printf("%s\n", verify_solution_file(verify_path).dump(2).c_str());
      return 0;
    }
    if (!run->parsed()) {
      std::fprintf(stderr, "error: expected `run <config.json>` or --verify-only\n");
      return 2;
    }
    std::ifstream in(config_path);
    if (!in) {
      std::fprintf(stderr, "error: cannot read config file: %s\n", config_path.c_str());
      return 2;
    }
    nlohmann::json doc;
    in >> doc;
    const RunConfig cfg = parse_run_config(doc);
    const RunResult result = run_cases(cfg, flags);
    std::printf("%s", summary_table(result.rows).c_str());
    if (!result.all_usable) {
      std::fprintf(stderr, "error: at least one case failed to reach feasibility\n");
      return 1;
    }
    return 0;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}

}  // namespace ares
