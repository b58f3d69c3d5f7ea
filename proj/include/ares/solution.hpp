// Solution persistence: everything needed to reconstruct, re-audit, and
// re-verify a solved case from disk, with full floating-point fidelity.
#pragma once

#include <string>

#include "json.hpp"

#include "ares/transcription.hpp"

namespace ares {

struct SolutionBundle {
  ProblemConfig config;
  PhysicalConstants constants = PhysicalConstants::defaults();
  Mesh mesh;
  TrajectoryBundle trajectory;
  std::string status;          ///< NLP status string
  double objective_days = 0.0;  ///< solver-reported transfer time
  double max_violation = 0.0;
  int iterations = 0;

  /// Rebuilds the problem and transcription this solution was produced on.
  /// The packed decision vector reproduces the stored trajectory exactly.
  Eigen::VectorXd pack(const TranscribedNlp& nlp) const { return nlp.pack(trajectory); }
};

nlohmann::json solution_to_json(const SolutionBundle& s);
SolutionBundle solution_from_json(const nlohmann::json& j);

/// Mode/variant names used in solution files and CLI configs.
std::string to_string(Mode m);
std::string to_string(Variant v);
Mode mode_from_string(const std::string& s);
Variant variant_from_string(const std::string& s);

}  // namespace ares
