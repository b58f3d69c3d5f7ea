#include "ares/solution.hpp"

#include <stdexcept>

namespace ares {

namespace {

nlohmann::json matrix_to_json(const Eigen::MatrixXd& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const nlohmann::json& j) {
  const Eigen::Index rows = static_cast<Eigen::Index>(j.size());
  if (rows == 0) return {};
  const Eigen::Index cols = static_cast<Eigen::Index>(j.at(0).size());
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index k = 0; k < cols; ++k) m(i, k) = j.at(i).at(k).get<double>();
  return m;
}

}  // namespace

std::string to_string(Mode m) {
  switch (m) {
    case Mode::circular: return "circular";
    case Mode::elliptic: return "elliptic";
    case Mode::elliptic_perturbed: return "elliptic_perturbed";
  }
  return "unknown";
}

std::string to_string(Variant v) {
  return v == Variant::four_phase ? "four_phase" : "three_phase_comparison";
}

Mode mode_from_string(const std::string& s) {
  if (s == "circular") return Mode::circular;
  if (s == "elliptic") return Mode::elliptic;
  if (s == "elliptic_perturbed") return Mode::elliptic_perturbed;
  throw std::invalid_argument("unknown mode: " + s);
}

Variant variant_from_string(const std::string& s) {
  if (s == "four_phase") return Variant::four_phase;
  if (s == "three_phase_comparison") return Variant::three_phase_comparison;
  throw std::invalid_argument("unknown variant: " + s);
}

nlohmann::json solution_to_json(const SolutionBundle& s) {
  nlohmann::json cfg{{"mode", to_string(s.config.mode)},
                     {"variant", to_string(s.config.variant)},
                     {"a_thrust_si", s.config.a_thrust_si},
                     {"epoch_utc", s.config.epoch_utc},
                     {"L_E0", s.config.L_E0},
                     {"L_M0", s.config.L_M0},
                     {"e_E", s.config.e_E},
                     {"e_M", s.config.e_M},
                     {"r_park_E", s.config.r_park_E},
                     {"r_park_M", s.config.r_park_M},
                     {"relax_capture_vr", s.config.relax_phase4_vr},
                     {"handoff_escape_ratio", s.config.handoff_escape_ratio},
                     {"handoff_capture_ratio", s.config.handoff_capture_ratio}};
  if (s.config.fixed_phase_angle) cfg["fixed_phase_angle"] = *s.config.fixed_phase_angle;

  nlohmann::json mesh = nlohmann::json::array();
  for (const PhaseMesh& pm : s.mesh.phases) {
    nlohmann::json segs = nlohmann::json::array();
    for (const SegmentSpec& seg : pm.segments)
      segs.push_back({{"degree", seg.degree}, {"s0", seg.s0}, {"s1", seg.s1}});
    mesh.push_back(std::move(segs));
  }

  nlohmann::json phases = nlohmann::json::array();
  for (const PhaseTrajectory& tr : s.trajectory.phases)
    phases.push_back({{"t0", tr.t0},
                      {"tf", tr.tf},
                      {"states", matrix_to_json(tr.states)},
                      {"controls", matrix_to_json(tr.controls)}});

  const PhysicalConstants& pc = s.constants;
  nlohmann::json constants{{"R_E", pc.R_E},         {"R_M", pc.R_M},
                           {"R_E_SOI", pc.R_E_SOI}, {"R_M_SOI", pc.R_M_SOI},
                           {"R_SE", pc.R_SE},       {"R_SM", pc.R_SM},
                           {"mu_E", pc.mu_E},       {"mu_S", pc.mu_S},
                           {"mu_M", pc.mu_M},       {"varpi_E", pc.varpi_E},
                           {"varpi_M", pc.varpi_M}};

  return {{"schema_version", 1},
          {"config", std::move(cfg)},
          {"constants", std::move(constants)},
          {"mesh", std::move(mesh)},
          {"phases", std::move(phases)},
          {"status", s.status},
          {"objective_days", s.objective_days},
          {"max_violation", s.max_violation},
          {"iterations", s.iterations}};
}

SolutionBundle solution_from_json(const nlohmann::json& j) {
  if (j.at("schema_version").get<int>() != 1)
    throw std::invalid_argument("unsupported solution schema_version");
  SolutionBundle s;
  const nlohmann::json& cfg = j.at("config");
  s.config.mode = mode_from_string(cfg.at("mode").get<std::string>());
  s.config.variant = variant_from_string(cfg.at("variant").get<std::string>());
  s.config.a_thrust_si = cfg.at("a_thrust_si").get<double>();
  s.config.epoch_utc = cfg.at("epoch_utc").get<std::string>();
  s.config.L_E0 = cfg.at("L_E0").get<double>();
  s.config.L_M0 = cfg.at("L_M0").get<double>();
  s.config.e_E = cfg.at("e_E").get<double>();
  s.config.e_M = cfg.at("e_M").get<double>();
  s.config.r_park_E = cfg.at("r_park_E").get<double>();
  s.config.r_park_M = cfg.at("r_park_M").get<double>();
  s.config.relax_phase4_vr = cfg.at("relax_capture_vr").get<bool>();
  s.config.handoff_escape_ratio = cfg.at("handoff_escape_ratio").get<double>();
  s.config.handoff_capture_ratio = cfg.at("handoff_capture_ratio").get<double>();
  if (cfg.contains("fixed_phase_angle"))
    s.config.fixed_phase_angle = cfg.at("fixed_phase_angle").get<double>();

  const nlohmann::json& pc = j.at("constants");
  s.constants.R_E = pc.at("R_E").get<double>();
  s.constants.R_M = pc.at("R_M").get<double>();
  s.constants.R_E_SOI = pc.at("R_E_SOI").get<double>();
  s.constants.R_M_SOI = pc.at("R_M_SOI").get<double>();
  s.constants.R_SE = pc.at("R_SE").get<double>();
  s.constants.R_SM = pc.at("R_SM").get<double>();
  s.constants.mu_E = pc.at("mu_E").get<double>();
  s.constants.mu_S = pc.at("mu_S").get<double>();
  s.constants.mu_M = pc.at("mu_M").get<double>();
  s.constants.varpi_E = pc.at("varpi_E").get<double>();
  s.constants.varpi_M = pc.at("varpi_M").get<double>();

  for (const nlohmann::json& segs : j.at("mesh")) {
    PhaseMesh pm;
    for (const nlohmann::json& seg : segs)
      pm.segments.push_back({seg.at("degree").get<int>(), seg.at("s0").get<double>(),
                             seg.at("s1").get<double>()});
    s.mesh.phases.push_back(std::move(pm));
  }

  for (const nlohmann::json& jp : j.at("phases")) {
    PhaseTrajectory tr;
    tr.t0 = jp.at("t0").get<double>();
    tr.tf = jp.at("tf").get<double>();
    tr.states = matrix_from_json(jp.at("states"));
    tr.controls = matrix_from_json(jp.at("controls"));
    s.trajectory.phases.push_back(std::move(tr));
  }

  s.status = j.at("status").get<std::string>();
  s.objective_days = j.at("objective_days").get<double>();
  s.max_violation = j.at("max_violation").get<double>();
  s.iterations = j.at("iterations").get<int>();
  return s;
}

}  // namespace ares
