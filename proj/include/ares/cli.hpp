// Command-line front end internals, kept in the library so they are testable:
// run-configuration parsing/validation, calendar-date arithmetic, case
// orchestration, and artifact emission (summary CSV, per-case solution /
// trajectory / audit files).
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "ares/solution.hpp"
#include "ares/solve.hpp"
#include "ares/verify.hpp"

namespace ares {

/// Parsed and validated run configuration (file format).
struct RunConfig {
  Mode mode = Mode::circular;
  Variant variant = Variant::four_phase;
  std::vector<double> a_thrust;  ///< thrust specific forces to sweep [m/s^2]
  std::string epoch_utc = "2019-01-01";
  std::optional<double> phase_angle;  ///< L_M - L_E [rad], comparison variant
  PhysicalConstants constants = PhysicalConstants::defaults();
  std::optional<int> mesh_degree;
  std::optional<std::vector<int>> mesh_segments;  ///< per phase, problem order
  NlpOptions solver;
  std::string output_dir = "out";
  ProblemConfig base;  ///< fully-populated per-case template (thrust set later)
};

/// Parses and validates a configuration document.  Unknown keys are rejected
/// with an error naming the offending key; physical values must be positive.
RunConfig parse_run_config(const nlohmann::json& doc);

/// Calendar date `days` after the UTC epoch (proleptic Gregorian, day
/// precision, 1 d = 86400 s), e.g. ("2019-01-01", 547.63) -> "1 July 2020".
std::string start_date(const std::string& epoch_utc, double days);
/// Same date in ISO form, e.g. "2020-07-01" (used in CSV artifacts).
std::string start_date_iso(const std::string& epoch_utc, double days);

/// Stable case label for a thrust value, e.g. 9.8e-4 -> "9.8000e-04".
std::string case_label(double a_thrust_si);

/// One summary row (times in days, audited values).
struct ReportRow {
  double a_thrust_si = 0.0;
  std::vector<double> phase_days;
  double transfer_days = 0.0;
  std::string start_date;      ///< human form
  std::string start_date_iso;
  std::string status;
  double max_violation = 0.0;
  bool fallback = false;  ///< feasible but not proven optimal
};

struct RunResult {
  std::vector<ReportRow> rows;
  bool all_usable = true;  ///< every case feasible to 1e-6
};

struct RunFlags {
  std::string out_dir;          ///< overrides config output_dir when set
  std::string case_filter;      ///< substring filter on case labels
  bool emit_plot_data = false;
  bool verbose = false;
};

/// Executes the sweep described by `cfg`, writing artifacts under the output
/// directory, and returns the summary rows.
RunResult run_cases(const RunConfig& cfg, const RunFlags& flags);

/// Renders the summary artifacts from rows: machine CSV and human table.
std::string summary_csv(const std::vector<ReportRow>& rows);
std::string summary_table(const std::vector<ReportRow>& rows);

/// Re-audits a stored solution file; returns the audit document.
nlohmann::json verify_solution_file(const std::string& path);

/// Trajectory CSV (columns t_canonical, t_days, phase, r, theta, v_r,
/// v_theta, w_r, w_theta, L_E, L_M, ecc) sampled per phase.
std::string trajectory_csv(const TranscribedNlp& nlp, const Eigen::VectorXd& x,
                           int samples_per_phase = 400);

/// Entry point used by the executable; returns the process exit code.
int cli_main(int argc, char** argv);

}  // namespace ares
