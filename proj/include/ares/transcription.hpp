// Direct Legendre-Gauss-Radau collocation of the multi-phase problem into a
// sparse NLP: decision-vector layout, defect/path/pin/duration/event
// constraint stacking, exact first and second derivatives via dual numbers,
// and defect-driven mesh refinement.
#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <vector>

#include "json.hpp"

#include "ares/lgr.hpp"
#include "ares/nlp.hpp"
#include "ares/ocp.hpp"

namespace ares {

/// One mesh segment in the normalized phase time tau in [0, 1].
struct SegmentSpec {
  int degree;
  double s0, s1;
};

struct PhaseMesh {
  std::vector<SegmentSpec> segments;

  int n_collocation() const {
    int n = 0;
    for (const auto& s : segments) n += s.degree;
    return n;
  }
  int n_support() const { return n_collocation() + 1; }
};

struct Mesh {
  std::vector<PhaseMesh> phases;
};

/// Uniform mesh of the given segment counts, all at the same degree.
PhaseMesh uniform_phase_mesh(int segments, int degree);

/// Default mesh for a problem: degree 4; 4 segments for the alignment phase,
/// 48/32 for the escape/capture spirals, 12 for the heliocentric leg.
Mesh default_mesh(const Problem& problem);

/// Per-phase trajectory samples on a mesh: states at the support points
/// (n_support x nx, row-per-point), controls at the collocation points.
struct PhaseTrajectory {
  double t0 = 0.0, tf = 0.0;
  Eigen::MatrixXd states;
  Eigen::MatrixXd controls;
};

struct TrajectoryBundle {
  std::vector<PhaseTrajectory> phases;
};

/// Index bookkeeping for one phase inside the stacked NLP.
struct PhaseLayout {
  int t0_index, tf_index;
  int x_offset;  ///< index of state component 0 at support point 0
  int u_offset;  ///< index of control component 0 at collocation point 0
  int n_pts, n_col, nx, nu;
  int defect_offset;    ///< first defect row
  int path_offset;      ///< first path row (-1 when the phase has no control)
  int pin_offset;       ///< first boundary-pin row
  int n_pins;           ///< includes a fixed-t0 row when present
  int duration_row;     ///< the ranged row tf - t0
  std::vector<int> seg_support0;  ///< support index of each segment's first point

  int x_index(int point, int comp) const { return x_offset + point * nx + comp; }
  int u_index(int col, int comp) const { return u_offset + col * nu + comp; }
};

/// The collocated multi-phase problem as a sparse NLP.  Variable order per
/// phase: [t0, tf, states point-major, controls point-major]; constraint
/// order: per phase [defects, path, pins, duration], then all event rows.
class TranscribedNlp : public NlpProblem {
 public:
  TranscribedNlp(const Problem& problem, Mesh mesh);

  int num_vars() const override { return n_vars_; }
  int num_cons() const override { return n_cons_; }
  const Eigen::VectorXd& var_lower() const override { return x_lower_; }
  const Eigen::VectorXd& var_upper() const override { return x_upper_; }
  const Eigen::VectorXd& con_lower() const override { return c_lower_; }
  const Eigen::VectorXd& con_upper() const override { return c_upper_; }

  double objective(const Eigen::VectorXd& x) const override;
  Eigen::VectorXd objective_gradient(const Eigen::VectorXd& x) const override;
  Eigen::VectorXd constraints(const Eigen::VectorXd& x) const override;
  Eigen::SparseMatrix<double> jacobian(const Eigen::VectorXd& x) const override;
  Eigen::SparseMatrix<double> lagrangian_hessian(const Eigen::VectorXd& x,
                                                 const Eigen::VectorXd& lambda,
                                                 double sigma) const override;

  const Problem& problem() const { return *problem_; }
  const Mesh& mesh() const { return mesh_; }
  const std::vector<PhaseLayout>& layout() const { return layout_; }
  int event_offset() const { return event_offset_; }
  int num_event_rows() const { return n_event_rows_; }

  /// Phase-local times of the support / collocation points given t0, tf.
  std::vector<double> support_fractions(int phase) const;
  std::vector<double> collocation_fractions(int phase) const;

  Eigen::VectorXd pack(const TrajectoryBundle& bundle) const;
  TrajectoryBundle unpack(const Eigen::VectorXd& x) const;

  /// State / control of one phase interpolated at normalized time tau in
  /// [0, 1], using the per-segment collocating polynomials.
  Eigen::VectorXd interp_state(const PhaseTrajectory& traj, int phase, double tau) const;
  Eigen::VectorXd interp_control(const PhaseTrajectory& traj, int phase, double tau) const;

  nlohmann::json layout_json() const;

 private:
  const Problem* problem_;
  Mesh mesh_;
  std::vector<PhaseLayout> layout_;
  int n_vars_ = 0, n_cons_ = 0, n_event_rows_ = 0;
  int event_offset_ = 0;
  Eigen::VectorXd x_lower_, x_upper_, c_lower_, c_upper_;
};

/// Outcome of one refinement pass.
struct RefinementReport {
  Mesh mesh;
  bool changed = false;
  double max_error = 0.0;  ///< largest per-segment re-integration error
};

/// Compares each segment's collocating polynomial against an adaptive
/// re-integration from the segment's initial state.  Segments over `tol`
/// are deepened: degree + 1 while the error is within 5x tol and the degree
/// is below 7, otherwise split in two.
RefinementReport refine_mesh(const TranscribedNlp& nlp, const Eigen::VectorXd& x,
                             double tol = 1e-7);

/// Resamples a solution from one transcription onto another (same problem),
/// for warm-starting after refinement.
Eigen::VectorXd resample(const TranscribedNlp& from, const Eigen::VectorXd& x,
                         const TranscribedNlp& to);

}  // namespace ares
