// Solution driver: staged initial-guess construction (propagated spiral
// seeds, single-phase minimum-time solves, four-phase assembly), warm-started
// continuation across thrust levels and fidelity modes, and the
// mesh-refinement solve loop.
#pragma once

#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "ares/nlp.hpp"
#include "ares/ocp.hpp"
#include "ares/transcription.hpp"

namespace ares {

struct SolveOptions {
  NlpOptions nlp;
  NlpOptions stage_nlp;      ///< settings for the single-phase seed solves
  std::optional<int> mesh_degree;                 ///< override collocation degree
  std::optional<std::vector<int>> mesh_segments;  ///< override per-phase counts
  double mesh_tol = 1e-7;
  double mu_warm = 1e-4;     ///< barrier start for refinement / same-mode warm solves
  int max_refinements = 3;
  bool verbose = false;

  SolveOptions() {
    stage_nlp.max_iter = 600;
    stage_nlp.feas_tol = 1e-8;
    stage_nlp.opt_tol = 1e-5;
  }
};

struct SolveOutcome {
  ProblemConfig config;
  NlpSolution nlp;
  Mesh mesh;
  TrajectoryBundle trajectory;
  double transfer_days = 0.0;
  std::vector<double> phase_days;  ///< per-phase durations [days], problem order
  double alignment_days = 0.0;     ///< phase-1 duration (0 for three-phase)
};

/// Builds the staged initial guess for a full problem on the given mesh.
TrajectoryBundle build_guess(const Problem& problem, const TranscribedNlp& nlp,
                             const SolveOptions& opts);

/// Solves one configuration cold (guess construction included).
SolveOutcome solve_problem(const Problem& problem, const SolveOptions& opts);

/// Continuation driver: caches converged solutions per (variant, mode) and
/// warm-starts neighboring thrust levels and higher-fidelity modes.
class TransferSolver {
 public:
  TransferSolver(PhysicalConstants constants, SolveOptions opts)
      : constants_(constants), opts_(opts) {}

  SolveOutcome solve(const ProblemConfig& config);

 private:
  struct CacheEntry {
    Mesh mesh;
    Eigen::VectorXd x;
    double a_thrust_si;
  };

  PhysicalConstants constants_;
  SolveOptions opts_;
  std::map<std::pair<int, int>, CacheEntry> cache_;  ///< key (variant, mode)
  /// Finished outcomes keyed (variant, mode, thrust): repeat requests for an
  /// already-solved case return immediately instead of re-solving.
  std::map<std::tuple<int, int, double>, SolveOutcome> results_;

  SolveOutcome solve_with_start(const Problem& problem, const Mesh& mesh,
                                const Eigen::VectorXd& x0, double warm_mu);
};

/// Per-phase durations in days and the transfer time, recomputed from the
/// trajectory (not copied from the solver objective).
void fill_report_times(const Problem& problem, SolveOutcome& outcome);

}  // namespace ares
