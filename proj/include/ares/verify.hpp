// Independent verification of solved trajectories: high-accuracy open-loop
// re-integration, osculating-eccentricity diagnostics with unity-crossing
// detection, and residual audits recomputed from the raw solution.
#pragma once

#include <optional>
#include <vector>

#include "json.hpp"

#include "ares/transcription.hpp"

namespace ares {

/// Osculating (instantaneous two-body) eccentricity of a planar polar state.
/// With h = r * v_theta:  e = sqrt((h^2/(mu r) - 1)^2 + (h v_r / mu)^2).
double osculating_eccentricity(double mu, double r, double v_r, double v_theta);

/// One sample of the per-phase eccentricity time series.
struct EccSample {
  double fraction;  ///< phase fraction in [0, 1]
  double ecc;
};

struct PhaseAudit {
  int phase_id = 0;
  double duration_canonical = 0.0;
  double duration_days = 0.0;
  double max_defect = 0.0;          ///< largest collocation defect residual
  double replay_terminal_error = 0.0;  ///< open-loop re-integration vs collocation
  double initial_radius = 0.0, terminal_radius = 0.0;
  double initial_ecc = 0.0, terminal_ecc = 0.0;
  std::vector<EccSample> ecc_series;
  /// Phase fraction where the eccentricity crosses 1 (upward for escape,
  /// downward for capture), when such a crossing exists.
  std::optional<double> ecc_unity_crossing;
};

struct TrajectoryAudit {
  std::vector<PhaseAudit> phases;
  std::vector<double> event_residuals;  ///< all event rows, recomputed
  double max_defect = 0.0;
  double max_event_residual = 0.0;
  double max_replay_error = 0.0;
  double alignment_days = 0.0;
  double transfer_days = 0.0;  ///< audited objective, re-derived from times
};

/// Recomputes every audited quantity from the solution variables alone.
/// `ecc_samples` controls the eccentricity time-series resolution per phase.
TrajectoryAudit audit_trajectory(const TranscribedNlp& nlp, const Eigen::VectorXd& x,
                                 int ecc_samples = 400);

nlohmann::json audit_json(const TrajectoryAudit& a);

}  // namespace ares
