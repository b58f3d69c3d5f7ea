#include "ares/transcription.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ares/dual.hpp"
#include "ares/propagate.hpp"

namespace ares {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Evaluates the phase right-hand side with z = [states, controls].
template <class T>
void eval_rhs(const PhaseContext& ctx, int nx, const T* z, T* dx) {
  if (nx == 2) {
    planet_pair_rates(ctx, z[0], z[1], dx[0], dx[1]);
  } else {
    spacecraft_phase_rhs(ctx, z, z + 6, dx);
  }
}

// Calls f(p, seg, rule, support0, gcol0, w) for every segment; gcol0 is the
// phase-local index of the segment's first collocation point and w the
// half-width (s1 - s0)/2 of the segment in normalized phase time.
template <class F>
void for_each_segment(const Mesh& mesh, F&& f) {
  for (int p = 0; p < static_cast<int>(mesh.phases.size()); ++p) {
    int support0 = 0;
    for (int k = 0; k < static_cast<int>(mesh.phases[p].segments.size()); ++k) {
      const SegmentSpec& seg = mesh.phases[p].segments[k];
      const RadauRule& rule = radau_rule(seg.degree);
      f(p, seg, rule, support0, support0, 0.5 * (seg.s1 - seg.s0));
      support0 += seg.degree;
    }
  }
}

void check_finite(const Eigen::VectorXd& v, const char* what) {
  if (!v.allFinite()) throw EvaluationFault(std::string("non-finite value in ") + what);
}

// Variable indices feeding one event link: [planet-side endpoint (7), then
// helio-side endpoint (7)] for the planet links; [phase-1 end (3), phase-2
// start (3)] for the alignment link.
struct EventVars {
  std::array<int, 14> idx{};
  int n = 0;
};

EventVars event_vars(const EventLink& link, const std::vector<PhaseLayout>& layout) {
  EventVars ev;
  auto endpoint = [&](int phase, bool final_point, int time_index) {
    const PhaseLayout& L = layout[phase];
    const int pt = final_point ? L.n_pts - 1 : 0;
    ev.idx[ev.n++] = time_index;
    if (L.nx == 2) {
      ev.idx[ev.n++] = L.x_index(pt, 0);
      ev.idx[ev.n++] = L.x_index(pt, 1);
    } else {
      for (int c = 0; c < 6; ++c) ev.idx[ev.n++] = L.x_index(pt, c);
    }
  };
  switch (link.kind) {
    case EventKind::alignment_to_earth:
      endpoint(link.from, true, layout[link.from].tf_index);
      // phase-2 longitudes are state components 4, 5
      ev.idx[ev.n++] = layout[link.to].t0_index;
      ev.idx[ev.n++] = layout[link.to].x_index(0, 4);
      ev.idx[ev.n++] = layout[link.to].x_index(0, 5);
      break;
    case EventKind::earth_to_helio:
      endpoint(link.from, true, layout[link.from].tf_index);   // planet side
      endpoint(link.to, false, layout[link.to].t0_index);      // helio side
      break;
    case EventKind::helio_to_mars:
      endpoint(link.to, false, layout[link.to].t0_index);      // planet side
      endpoint(link.from, true, layout[link.from].tf_index);   // helio side
      break;
  }
  return ev;
}

template <class T>
void eval_event(const Problem& prob, const EventLink& link, const T* z, T* out) {
  if (link.kind == EventKind::alignment_to_earth) {
    alignment_kernel(z, z + 3, out);
    return;
  }
  const bool mars = link.kind == EventKind::helio_to_mars;
  // Planet models in heliocentric canonical units live on the heliocentric
  // phase's context (phase index link.from for helio_to_mars, link.to else).
  const PhaseContext& helio_ctx =
      mars ? prob.phases[link.from].ctx : prob.phases[link.to].ctx;
  const PlanetModel& model = mars ? helio_ctx.mars : helio_ctx.earth;
  planet_to_helio_link_kernel(model, link.factors, z, z + 7, mars, out);
}

}  // namespace

PhaseMesh uniform_phase_mesh(int segments, int degree) {
  PhaseMesh m;
  m.segments.reserve(segments);
  for (int k = 0; k < segments; ++k)
    m.segments.push_back(
        {degree, static_cast<double>(k) / segments, static_cast<double>(k + 1) / segments});
  return m;
}

Mesh default_mesh(const Problem& problem) {
  Mesh mesh;
  for (const auto& ph : problem.phases) {
    switch (ph.id) {
      // The escape/capture spirals span many revolutions; give them enough
      // segments that a quartic per segment resolves well under one radian.
      case 1: mesh.phases.push_back(uniform_phase_mesh(4, 4)); break;
      case 2: mesh.phases.push_back(uniform_phase_mesh(48, 4)); break;
      case 3: mesh.phases.push_back(uniform_phase_mesh(12, 4)); break;
      default: mesh.phases.push_back(uniform_phase_mesh(32, 4)); break;
    }
  }
  return mesh;
}

TranscribedNlp::TranscribedNlp(const Problem& problem, Mesh mesh)
    : problem_(&problem), mesh_(std::move(mesh)) {
  const int np = static_cast<int>(problem.phases.size());
  if (static_cast<int>(mesh_.phases.size()) != np)
    throw std::invalid_argument("mesh/problem phase count mismatch");

  layout_.resize(np);
  int var = 0, con = 0;
  for (int p = 0; p < np; ++p) {
    const PhaseDefinition& ph = problem.phases[p];
    const PhaseMesh& pm = mesh_.phases[p];
    PhaseLayout& L = layout_[p];
    L.nx = ph.nx;
    L.nu = ph.nu;
    L.n_pts = pm.n_support();
    L.n_col = pm.n_collocation();
    L.t0_index = var++;
    L.tf_index = var++;
    L.x_offset = var;
    var += L.n_pts * L.nx;
    L.u_offset = var;
    var += L.n_col * L.nu;

    int s0 = 0;
    for (const auto& seg : pm.segments) {
      L.seg_support0.push_back(s0);
      s0 += seg.degree;
    }

    L.defect_offset = con;
    con += L.n_col * L.nx;
    L.path_offset = L.nu > 0 ? con : -1;
    if (L.nu > 0) con += L.n_col;
    L.pin_offset = con;
    L.n_pins = static_cast<int>(ph.initial_pins.size() + ph.final_pins.size()) +
               (ph.t0_fixed ? 1 : 0);
    con += L.n_pins;
    L.duration_row = con++;
  }
  event_offset_ = con;
  for (const auto& link : problem.links) con += link.rows;
  n_event_rows_ = con - event_offset_;
  n_vars_ = var;
  n_cons_ = con;

  // ---- Variable bounds.
  x_lower_.setConstant(n_vars_, -kInf);
  x_upper_.setConstant(n_vars_, kInf);
  for (int p = 0; p < np; ++p) {
    const PhaseDefinition& ph = problem.phases[p];
    const PhaseLayout& L = layout_[p];
    // A fixed t0 is enforced by its pin row; leave the variable box open so
    // the boundary value is not pushed off the barrier.
    if (!ph.t0_fixed) {
      x_lower_[L.t0_index] = ph.t0_lower;
      x_upper_[L.t0_index] = ph.t0_upper;
    }
    x_lower_[L.tf_index] = ph.tf_lower;
    x_upper_[L.tf_index] = ph.tf_upper;
    for (int i = 0; i < L.n_pts; ++i)
      for (int c = 0; c < L.nx; ++c) {
        x_lower_[L.x_index(i, c)] = ph.x_lower[c];
        x_upper_[L.x_index(i, c)] = ph.x_upper[c];
      }
    for (int i = 0; i < L.n_col; ++i)
      for (int c = 0; c < L.nu; ++c) {
        x_lower_[L.u_index(i, c)] = ph.u_lower[c];
        x_upper_[L.u_index(i, c)] = ph.u_upper[c];
      }
    // Pinned entries: the equality row carries the value; open the box so the
    // pin is reachable even when it sits exactly on a bound.
    for (const auto& pin : ph.initial_pins) {
      x_lower_[L.x_index(0, pin.state_index)] = -kInf;
      x_upper_[L.x_index(0, pin.state_index)] = kInf;
    }
    for (const auto& pin : ph.final_pins) {
      x_lower_[L.x_index(L.n_pts - 1, pin.state_index)] = -kInf;
      x_upper_[L.x_index(L.n_pts - 1, pin.state_index)] = kInf;
    }
  }

  // ---- Constraint bounds.
  c_lower_.setZero(n_cons_);
  c_upper_.setZero(n_cons_);
  for (int p = 0; p < np; ++p) {
    const PhaseDefinition& ph = problem.phases[p];
    const PhaseLayout& L = layout_[p];
    int row = L.pin_offset;
    for (const auto& pin : ph.initial_pins) {
      c_lower_[row] = c_upper_[row] = pin.value;
      ++row;
    }
    for (const auto& pin : ph.final_pins) {
      c_lower_[row] = c_upper_[row] = pin.value;
      ++row;
    }
    if (ph.t0_fixed) {
      c_lower_[row] = c_upper_[row] = *ph.t0_fixed;
      ++row;
    }
    c_lower_[L.duration_row] = ph.dur_lower;
    c_upper_[L.duration_row] = ph.dur_upper;
  }
}

double TranscribedNlp::objective(const Eigen::VectorXd& x) const {
  return problem_->tf_factor * x[layout_[problem_->obj_tf_phase].tf_index] -
         problem_->t0_factor * x[layout_[problem_->obj_t0_phase].t0_index];
}

Eigen::VectorXd TranscribedNlp::objective_gradient(const Eigen::VectorXd& x) const {
  Eigen::VectorXd g = Eigen::VectorXd::Zero(n_vars_);
  (void)x;
  g[layout_[problem_->obj_tf_phase].tf_index] = problem_->tf_factor;
  g[layout_[problem_->obj_t0_phase].t0_index] = -problem_->t0_factor;
  return g;
}

Eigen::VectorXd TranscribedNlp::constraints(const Eigen::VectorXd& x) const {
  check_finite(x, "decision vector");
  Eigen::VectorXd c = Eigen::VectorXd::Zero(n_cons_);

  for_each_segment(mesh_, [&](int p, const SegmentSpec&, const RadauRule& rule, int support0,
                              int gcol0, double w) {
    const PhaseLayout& L = layout_[p];
    const PhaseContext& ctx = problem_->phases[p].ctx;
    const double dt = x[L.tf_index] - x[L.t0_index];
    const int nz = L.nx + L.nu;
    std::array<double, 8> z{};
    std::array<double, 6> f{};
    for (int i = 0; i < rule.degree; ++i) {
      const int gcol = gcol0 + i;
      const int pt = support0 + i;
      for (int cc = 0; cc < L.nx; ++cc) z[cc] = x[L.x_index(pt, cc)];
      for (int cc = 0; cc < L.nu; ++cc) z[L.nx + cc] = x[L.u_index(gcol, cc)];
      eval_rhs(ctx, L.nx, z.data(), f.data());
      (void)nz;
      for (int m = 0; m < L.nx; ++m) {
        double acc = 0.0;
        for (int j = 0; j <= rule.degree; ++j)
          acc += rule.diff(i, j) * x[L.x_index(support0 + j, m)];
        c[L.defect_offset + gcol * L.nx + m] = acc - w * dt * f[m];
      }
      if (L.nu > 0)
        c[L.path_offset + gcol] =
            path_constraint(x[L.u_index(gcol, 0)], x[L.u_index(gcol, 1)]);
    }
  });

  for (int p = 0; p < static_cast<int>(layout_.size()); ++p) {
    const PhaseDefinition& ph = problem_->phases[p];
    const PhaseLayout& L = layout_[p];
    int row = L.pin_offset;
    for (const auto& pin : ph.initial_pins) c[row++] = x[L.x_index(0, pin.state_index)];
    for (const auto& pin : ph.final_pins)
      c[row++] = x[L.x_index(L.n_pts - 1, pin.state_index)];
    if (ph.t0_fixed) c[row++] = x[L.t0_index];
    c[L.duration_row] = x[L.tf_index] - x[L.t0_index];
  }

  int erow = event_offset_;
  for (const auto& link : problem_->links) {
    const EventVars ev = event_vars(link, layout_);
    std::array<double, 14> z{};
    for (int i = 0; i < ev.n; ++i) z[i] = x[ev.idx[i]];
    std::array<double, 7> out{};
    eval_event(*problem_, link, z.data(), out.data());
    for (int i = 0; i < link.rows; ++i) c[erow + i] = out[i];
    erow += link.rows;
  }

  check_finite(c, "constraints");
  return c;
}

namespace {

// Jacobian contribution of the collocation points of one phase, for a
// compile-time seed width NZ = nx + nu.
template <int NZ>
void defect_jacobian_block(const PhaseLayout& L, const PhaseContext& ctx, const RadauRule& rule,
                           int support0, int gcol0, double w, const Eigen::VectorXd& x,
                           std::vector<Eigen::Triplet<double>>& trip) {
  const int nx = L.nx;
  const double dt = x[L.tf_index] - x[L.t0_index];
  std::array<Dual<NZ>, NZ> z;
  std::array<Dual<NZ>, 6> f;
  std::array<int, NZ> cols;
  for (int i = 0; i < rule.degree; ++i) {
    const int gcol = gcol0 + i;
    const int pt = support0 + i;
    for (int cc = 0; cc < nx; ++cc) {
      z[cc] = Dual<NZ>::seed(x[L.x_index(pt, cc)], cc);
      cols[cc] = L.x_index(pt, cc);
    }
    for (int cc = 0; cc < L.nu; ++cc) {
      z[nx + cc] = Dual<NZ>::seed(x[L.u_index(gcol, cc)], nx + cc);
      cols[nx + cc] = L.u_index(gcol, cc);
    }
    eval_rhs(ctx, nx, z.data(), f.data());
    for (int m = 0; m < nx; ++m) {
      const int row = L.defect_offset + gcol * nx + m;
      for (int j = 0; j <= rule.degree; ++j)
        trip.emplace_back(row, L.x_index(support0 + j, m), rule.diff(i, j));
      for (int a = 0; a < NZ; ++a) {
        const double d = -w * dt * f[m].d[a];
        if (d != 0.0) trip.emplace_back(row, cols[a], d);
      }
      trip.emplace_back(row, L.t0_index, w * f[m].v);
      trip.emplace_back(row, L.tf_index, -w * f[m].v);
    }
    if (L.nu > 0) {
      const int row = L.path_offset + gcol;
      trip.emplace_back(row, L.u_index(gcol, 0), 2.0 * x[L.u_index(gcol, 0)]);
      trip.emplace_back(row, L.u_index(gcol, 1), 2.0 * x[L.u_index(gcol, 1)]);
    }
  }
}

// Hessian contribution (lambda-weighted) of the collocation points of one
// phase.  Local column order: [z (NZ), t0, tf].
template <int NZ>
void defect_hessian_block(const PhaseLayout& L, const PhaseContext& ctx, const RadauRule& rule,
                          int support0, int gcol0, double w, const Eigen::VectorXd& x,
                          const Eigen::VectorXd& lambda,
                          std::vector<Eigen::Triplet<double>>& trip) {
  const int nx = L.nx;
  const double dt = x[L.tf_index] - x[L.t0_index];
  std::array<Dual2<NZ>, NZ> z;
  std::array<Dual2<NZ>, 6> f;
  std::array<int, NZ + 2> cols;
  for (int i = 0; i < rule.degree; ++i) {
    const int gcol = gcol0 + i;
    const int pt = support0 + i;
    for (int cc = 0; cc < nx; ++cc) {
      z[cc] = Dual2<NZ>::seed(x[L.x_index(pt, cc)], cc);
      cols[cc] = L.x_index(pt, cc);
    }
    for (int cc = 0; cc < L.nu; ++cc) {
      z[nx + cc] = Dual2<NZ>::seed(x[L.u_index(gcol, cc)], nx + cc);
      cols[nx + cc] = L.u_index(gcol, cc);
    }
    cols[NZ] = L.t0_index;
    cols[NZ + 1] = L.tf_index;
    eval_rhs(ctx, nx, z.data(), f.data());
    // Weighted combination g = sum_m lambda_row(m) * f_m.
    Dual2<NZ> g(0.0);
    bool any = false;
    for (int m = 0; m < nx; ++m) {
      const double lm = lambda[L.defect_offset + gcol * nx + m];
      if (lm != 0.0) {
        g = g + lm * f[m];
        any = true;
      }
    }
    if (any) {
      for (int a = 0; a < NZ; ++a) {
        for (int b = 0; b < NZ; ++b) {
          const double h = -w * dt * g.h(a, b);
          if (h != 0.0) trip.emplace_back(cols[a], cols[b], h);
        }
        const double ht = w * g.g[a];  // d^2 / dt0 dz_a
        if (ht != 0.0) {
          trip.emplace_back(cols[NZ], cols[a], ht);
          trip.emplace_back(cols[a], cols[NZ], ht);
          trip.emplace_back(cols[NZ + 1], cols[a], -ht);
          trip.emplace_back(cols[a], cols[NZ + 1], -ht);
        }
      }
    }
    if (L.nu > 0) {
      const double lp = lambda[L.path_offset + gcol];
      if (lp != 0.0) {
        trip.emplace_back(cols[nx], cols[nx], 2.0 * lp);
        trip.emplace_back(cols[nx + 1], cols[nx + 1], 2.0 * lp);
      }
    }
  }
}

}  // namespace

Eigen::SparseMatrix<double> TranscribedNlp::jacobian(const Eigen::VectorXd& x) const {
  check_finite(x, "decision vector");
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<size_t>(n_cons_) * 12);

  for_each_segment(mesh_, [&](int p, const SegmentSpec&, const RadauRule& rule, int support0,
                              int gcol0, double w) {
    const PhaseLayout& L = layout_[p];
    const PhaseContext& ctx = problem_->phases[p].ctx;
    if (L.nx == 2)
      defect_jacobian_block<2>(L, ctx, rule, support0, gcol0, w, x, trip);
    else
      defect_jacobian_block<8>(L, ctx, rule, support0, gcol0, w, x, trip);
  });

  for (int p = 0; p < static_cast<int>(layout_.size()); ++p) {
    const PhaseDefinition& ph = problem_->phases[p];
    const PhaseLayout& L = layout_[p];
    int row = L.pin_offset;
    for (const auto& pin : ph.initial_pins)
      trip.emplace_back(row++, L.x_index(0, pin.state_index), 1.0);
    for (const auto& pin : ph.final_pins)
      trip.emplace_back(row++, L.x_index(L.n_pts - 1, pin.state_index), 1.0);
    if (ph.t0_fixed) trip.emplace_back(row++, L.t0_index, 1.0);
    trip.emplace_back(L.duration_row, L.tf_index, 1.0);
    trip.emplace_back(L.duration_row, L.t0_index, -1.0);
  }

  int erow = event_offset_;
  for (const auto& link : problem_->links) {
    const EventVars ev = event_vars(link, layout_);
    if (link.kind == EventKind::alignment_to_earth) {
      std::array<Dual<6>, 6> z;
      for (int i = 0; i < 6; ++i) z[i] = Dual<6>::seed(x[ev.idx[i]], i);
      std::array<Dual<6>, 7> out;
      eval_event(*problem_, link, z.data(), out.data());
      for (int r = 0; r < link.rows; ++r)
        for (int a = 0; a < 6; ++a)
          if (out[r].d[a] != 0.0) trip.emplace_back(erow + r, ev.idx[a], out[r].d[a]);
    } else {
      std::array<Dual<14>, 14> z;
      for (int i = 0; i < 14; ++i) z[i] = Dual<14>::seed(x[ev.idx[i]], i);
      std::array<Dual<14>, 7> out;
      eval_event(*problem_, link, z.data(), out.data());
      for (int r = 0; r < link.rows; ++r)
        for (int a = 0; a < 14; ++a)
          if (out[r].d[a] != 0.0) trip.emplace_back(erow + r, ev.idx[a], out[r].d[a]);
    }
    erow += link.rows;
  }

  for (const auto& t : trip)
    if (!std::isfinite(t.value())) throw EvaluationFault("non-finite Jacobian entry");

  Eigen::SparseMatrix<double> J(n_cons_, n_vars_);
  J.setFromTriplets(trip.begin(), trip.end());
  return J;
}

Eigen::SparseMatrix<double> TranscribedNlp::lagrangian_hessian(const Eigen::VectorXd& x,
                                                               const Eigen::VectorXd& lambda,
                                                               double sigma) const {
  check_finite(x, "decision vector");
  (void)sigma;  // the objective is linear
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<size_t>(n_vars_) * 8);

  for_each_segment(mesh_, [&](int p, const SegmentSpec&, const RadauRule& rule, int support0,
                              int gcol0, double w) {
    const PhaseLayout& L = layout_[p];
    const PhaseContext& ctx = problem_->phases[p].ctx;
    if (L.nx == 2)
      defect_hessian_block<2>(L, ctx, rule, support0, gcol0, w, x, lambda, trip);
    else
      defect_hessian_block<8>(L, ctx, rule, support0, gcol0, w, x, lambda, trip);
  });

  int erow = event_offset_;
  for (const auto& link : problem_->links) {
    if (link.kind != EventKind::alignment_to_earth) {
      const EventVars ev = event_vars(link, layout_);
      std::array<Dual2<14>, 14> z;
      for (int i = 0; i < 14; ++i) z[i] = Dual2<14>::seed(x[ev.idx[i]], i);
      std::array<Dual2<14>, 7> out;
      eval_event(*problem_, link, z.data(), out.data());
      Dual2<14> g(0.0);
      for (int r = 0; r < link.rows; ++r) {
        const double lm = lambda[erow + r];
        if (lm != 0.0) g = g + lm * out[r];
      }
      for (int a = 0; a < 14; ++a)
        for (int b = 0; b < 14; ++b)
          if (g.h(a, b) != 0.0) trip.emplace_back(ev.idx[a], ev.idx[b], g.h(a, b));
    }
    erow += link.rows;
  }

  for (const auto& t : trip)
    if (!std::isfinite(t.value())) throw EvaluationFault("non-finite Hessian entry");

  Eigen::SparseMatrix<double> H(n_vars_, n_vars_);
  H.setFromTriplets(trip.begin(), trip.end());
  return H;
}

std::vector<double> TranscribedNlp::support_fractions(int phase) const {
  std::vector<double> out;
  for (const auto& seg : mesh_.phases[phase].segments) {
    const RadauRule& rule = radau_rule(seg.degree);
    for (int i = 0; i < seg.degree; ++i)
      out.push_back(seg.s0 + 0.5 * (rule.nodes[i] + 1.0) * (seg.s1 - seg.s0));
  }
  out.push_back(1.0);
  return out;
}

std::vector<double> TranscribedNlp::collocation_fractions(int phase) const {
  std::vector<double> out = support_fractions(phase);
  out.pop_back();
  return out;
}

Eigen::VectorXd TranscribedNlp::pack(const TrajectoryBundle& bundle) const {
  if (bundle.phases.size() != layout_.size())
    throw std::invalid_argument("pack: phase count mismatch");
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n_vars_);
  for (int p = 0; p < static_cast<int>(layout_.size()); ++p) {
    const PhaseLayout& L = layout_[p];
    const PhaseTrajectory& tr = bundle.phases[p];
    if (tr.states.rows() != L.n_pts || tr.states.cols() != L.nx)
      throw std::invalid_argument("pack: state sample shape mismatch");
    if (L.nu > 0 && (tr.controls.rows() != L.n_col || tr.controls.cols() != L.nu))
      throw std::invalid_argument("pack: control sample shape mismatch");
    x[L.t0_index] = tr.t0;
    x[L.tf_index] = tr.tf;
    for (int i = 0; i < L.n_pts; ++i)
      for (int c = 0; c < L.nx; ++c) x[L.x_index(i, c)] = tr.states(i, c);
    for (int i = 0; i < L.n_col; ++i)
      for (int c = 0; c < L.nu; ++c) x[L.u_index(i, c)] = tr.controls(i, c);
  }
  return x;
}

TrajectoryBundle TranscribedNlp::unpack(const Eigen::VectorXd& x) const {
  TrajectoryBundle bundle;
  bundle.phases.resize(layout_.size());
  for (int p = 0; p < static_cast<int>(layout_.size()); ++p) {
    const PhaseLayout& L = layout_[p];
    PhaseTrajectory& tr = bundle.phases[p];
    tr.t0 = x[L.t0_index];
    tr.tf = x[L.tf_index];
    tr.states.resize(L.n_pts, L.nx);
    tr.controls.resize(L.n_col, L.nu);
    for (int i = 0; i < L.n_pts; ++i)
      for (int c = 0; c < L.nx; ++c) tr.states(i, c) = x[L.x_index(i, c)];
    for (int i = 0; i < L.n_col; ++i)
      for (int c = 0; c < L.nu; ++c) tr.controls(i, c) = x[L.u_index(i, c)];
  }
  return bundle;
}

namespace {

// Locates the segment containing tau and returns its index.
int find_segment(const PhaseMesh& pm, double tau) {
  for (int k = 0; k < static_cast<int>(pm.segments.size()); ++k)
    if (tau <= pm.segments[k].s1 || k + 1 == static_cast<int>(pm.segments.size())) return k;
  return static_cast<int>(pm.segments.size()) - 1;
}

}  // namespace

Eigen::VectorXd TranscribedNlp::interp_state(const PhaseTrajectory& traj, int phase,
                                             double tau) const {
  const PhaseMesh& pm = mesh_.phases[phase];
  const PhaseLayout& L = layout_[phase];
  const int k = find_segment(pm, tau);
  const SegmentSpec& seg = pm.segments[k];
  const RadauRule& rule = radau_rule(seg.degree);
  const double sigma = 2.0 * (tau - seg.s0) / (seg.s1 - seg.s0) - 1.0;
  const Eigen::VectorXd bw = barycentric_weights(rule.support);
  const Eigen::VectorXd ell = lagrange_basis(rule.support, bw, sigma);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(L.nx);
  const int s0 = L.seg_support0[k];
  for (int j = 0; j <= seg.degree; ++j) out += ell[j] * traj.states.row(s0 + j).transpose();
  return out;
}

Eigen::VectorXd TranscribedNlp::interp_control(const PhaseTrajectory& traj, int phase,
                                               double tau) const {
  const PhaseMesh& pm = mesh_.phases[phase];
  const PhaseLayout& L = layout_[phase];
  if (L.nu == 0) return Eigen::VectorXd();
  const int k = find_segment(pm, tau);
  const SegmentSpec& seg = pm.segments[k];
  const RadauRule& rule = radau_rule(seg.degree);
  const double sigma = 2.0 * (tau - seg.s0) / (seg.s1 - seg.s0) - 1.0;
  const Eigen::VectorXd bw = barycentric_weights(rule.nodes);
  const Eigen::VectorXd ell = lagrange_basis(rule.nodes, bw, sigma);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(L.nu);
  const int c0 = L.seg_support0[k];  // collocation index of segment start
  for (int j = 0; j < seg.degree; ++j) out += ell[j] * traj.controls.row(c0 + j).transpose();
  return out;
}

nlohmann::json TranscribedNlp::layout_json() const {
  nlohmann::json phases = nlohmann::json::array();
  for (int p = 0; p < static_cast<int>(layout_.size()); ++p) {
    const PhaseLayout& L = layout_[p];
    std::vector<int> degrees;
    for (const auto& seg : mesh_.phases[p].segments) degrees.push_back(seg.degree);
    phases.push_back({{"phase", problem_->phases[p].id},
                      {"segments", mesh_.phases[p].segments.size()},
                      {"degrees", degrees},
                      {"variable_offsets",
                       {{"t0", L.t0_index},
                        {"tf", L.tf_index},
                        {"states", L.x_offset},
                        {"controls", L.u_offset}}},
                      {"constraint_offsets",
                       {{"defects", L.defect_offset},
                        {"path", L.path_offset},
                        {"pins", L.pin_offset},
                        {"duration", L.duration_row}}}});
  }
  return {{"num_vars", n_vars_},
          {"num_cons", n_cons_},
          {"event_offset", event_offset_},
          {"phases", phases}};
}

RefinementReport refine_mesh(const TranscribedNlp& nlp, const Eigen::VectorXd& x, double tol) {
  const Problem& prob = nlp.problem();
  const TrajectoryBundle bundle = nlp.unpack(x);
  RefinementReport report;
  report.mesh.phases.resize(nlp.mesh().phases.size());

  OdeOptions ode;
  ode.rtol = 1e-10;
  ode.atol = 1e-10;

  for (int p = 0; p < static_cast<int>(nlp.mesh().phases.size()); ++p) {
    const PhaseMesh& pm = nlp.mesh().phases[p];
    const PhaseLayout& L = nlp.layout()[p];
    const PhaseContext& ctx = prob.phases[p].ctx;
    const PhaseTrajectory& tr = bundle.phases[p];
    const double dt = tr.tf - tr.t0;

    for (int k = 0; k < static_cast<int>(pm.segments.size()); ++k) {
      const SegmentSpec& seg = pm.segments[k];
      const RadauRule& rule = radau_rule(seg.degree);
      const int s0 = L.seg_support0[k];
      const double half = 0.5 * (seg.s1 - seg.s0);

      // Controls as the segment's interpolating polynomial in sigma.
      const Eigen::VectorXd ubary = L.nu > 0 ? barycentric_weights(rule.nodes) : Eigen::VectorXd();
      OdeRhs rhs = [&](double sigma, const Eigen::VectorXd& xs) {
        std::array<double, 8> z{};
        std::array<double, 6> f{};
        for (int c = 0; c < L.nx; ++c) z[c] = xs[c];
        if (L.nu > 0) {
          const Eigen::VectorXd ell = lagrange_basis(rule.nodes, ubary, sigma);
          for (int c = 0; c < L.nu; ++c) {
            double u = 0.0;
            for (int j = 0; j < seg.degree; ++j) u += ell[j] * tr.controls(s0 + j, c);
            z[L.nx + c] = u;
          }
        }
        eval_rhs(ctx, L.nx, z.data(), f.data());
        Eigen::VectorXd dx(L.nx);
        for (int c = 0; c < L.nx; ++c) dx[c] = half * dt * f[c];
        return dx;
      };

      // Re-integrate from the segment's first support point and compare at
      // every support node.
      std::vector<double> sigmas(rule.support.data() + 1,
                                 rule.support.data() + rule.support.size());
      double err = 0.0;
      try {
        const std::vector<Eigen::VectorXd> ref =
            integrate_at(rhs, tr.states.row(s0).transpose(), -1.0, sigmas, ode);
        for (size_t q = 0; q < sigmas.size(); ++q) {
          const Eigen::VectorXd poly = tr.states.row(s0 + 1 + static_cast<int>(q)).transpose();
          for (int c = 0; c < L.nx; ++c) {
            const double scale = 1.0 + std::abs(poly[c]);
            err = std::max(err, std::abs(ref[q][c] - poly[c]) / scale);
          }
        }
      } catch (const std::exception&) {
        err = kInf;  // unintegrable segment: force a split
      }
      report.max_error = std::max(report.max_error, std::isfinite(err) ? err : 1.0);

      PhaseMesh& out = report.mesh.phases[p];
      if (err <= tol) {
        out.segments.push_back(seg);
      } else if (err <= 5.0 * tol && seg.degree < 7) {
        out.segments.push_back({seg.degree + 1, seg.s0, seg.s1});
        report.changed = true;
      } else {
        const double mid = 0.5 * (seg.s0 + seg.s1);
        out.segments.push_back({seg.degree, seg.s0, mid});
        out.segments.push_back({seg.degree, mid, seg.s1});
        report.changed = true;
      }
    }
  }
  return report;
}

Eigen::VectorXd resample(const TranscribedNlp& from, const Eigen::VectorXd& x,
                         const TranscribedNlp& to) {
  const TrajectoryBundle old = from.unpack(x);
  TrajectoryBundle fresh;
  fresh.phases.resize(to.layout().size());
  for (int p = 0; p < static_cast<int>(to.layout().size()); ++p) {
    const PhaseLayout& L = to.layout()[p];
    PhaseTrajectory& tr = fresh.phases[p];
    tr.t0 = old.phases[p].t0;
    tr.tf = old.phases[p].tf;
    tr.states.resize(L.n_pts, L.nx);
    tr.controls.resize(L.n_col, L.nu);
    const std::vector<double> sf = to.support_fractions(p);
    for (int i = 0; i < L.n_pts; ++i)
      tr.states.row(i) = from.interp_state(old.phases[p], p, sf[i]).transpose();
    if (L.nu > 0) {
      const std::vector<double> cf = to.collocation_fractions(p);
      for (int i = 0; i < L.n_col; ++i)
        tr.controls.row(i) = from.interp_control(old.phases[p], p, cf[i]).transpose();
    }
  }
  return to.pack(fresh);
}

}  // namespace ares
