#include "ares/nlp.hpp"

#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <vector>

#include "ares/dynamics.hpp"  // EvaluationFault

namespace ares {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Scaling {
  Eigen::VectorXd sx;  ///< x = sx .* x_tilde
  Eigen::VectorXd sc;  ///< c_tilde = sc .* c
  double sf = 1.0;     ///< f_tilde = sf * f
};

// The solver core works on y = [x_tilde; slacks] with all constraints turned
// into equalities E(y) = 0 and bounds handled by the barrier.
struct CoreProblem {
  const NlpProblem* user;
  Scaling scal;
  int n;        // scaled decision variables
  int m;        // constraint rows
  int n_slack;
  int N;        // n + n_slack
  std::vector<int> slack_of_row;  // -1 for equality rows
  Eigen::VectorXd rhs_eq;         // target for equality rows (scaled)
  Eigen::VectorXd yl, yu;         // bounds on y

  Eigen::VectorXd user_x(const Eigen::VectorXd& y) const {
    return scal.sx.cwiseProduct(y.head(n));
  }

  double f(const Eigen::VectorXd& y) const { return scal.sf * user->objective(user_x(y)); }

  Eigen::VectorXd grad(const Eigen::VectorXd& y) const {
    Eigen::VectorXd g = Eigen::VectorXd::Zero(N);
    g.head(n) = scal.sf * scal.sx.cwiseProduct(user->objective_gradient(user_x(y)));
    return g;
  }

  // E(y) = sc .* c(x) - b - slacks
  Eigen::VectorXd residual(const Eigen::VectorXd& y) const {
    const Eigen::VectorXd c = user->constraints(user_x(y));
    Eigen::VectorXd E = scal.sc.cwiseProduct(c) - rhs_eq;
    for (int i = 0; i < m; ++i)
      if (slack_of_row[i] >= 0) E[i] -= y[n + slack_of_row[i]];
    return E;
  }

  Eigen::SparseMatrix<double> jac(const Eigen::VectorXd& y) const {
    const Eigen::SparseMatrix<double> J = user->jacobian(user_x(y));
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(J.nonZeros() + n_slack);
    for (int k = 0; k < J.outerSize(); ++k)
      for (Eigen::SparseMatrix<double>::InnerIterator it(J, k); it; ++it)
        trip.emplace_back(it.row(), it.col(),
                          scal.sc[it.row()] * it.value() * scal.sx[it.col()]);
    for (int i = 0; i < m; ++i)
      if (slack_of_row[i] >= 0) trip.emplace_back(i, n + slack_of_row[i], -1.0);
    Eigen::SparseMatrix<double> A(m, N);
    A.setFromTriplets(trip.begin(), trip.end());
    return A;
  }

  Eigen::SparseMatrix<double> hess(const Eigen::VectorXd& y, const Eigen::VectorXd& lambda) const {
    const Eigen::VectorXd lam_user = scal.sc.cwiseProduct(lambda);
    const Eigen::SparseMatrix<double> H = user->lagrangian_hessian(user_x(y), lam_user, scal.sf);
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(H.nonZeros());
    for (int k = 0; k < H.outerSize(); ++k)
      for (Eigen::SparseMatrix<double>::InnerIterator it(H, k); it; ++it)
        trip.emplace_back(it.row(), it.col(),
                          scal.sx[it.row()] * it.value() * scal.sx[it.col()]);
    Eigen::SparseMatrix<double> W(N, N);
    W.setFromTriplets(trip.begin(), trip.end());
    return W;
  }
};

double unscaled_violation(const NlpProblem& p, const Eigen::VectorXd& x, int* worst_row = nullptr) {
  const Eigen::VectorXd c = p.constraints(x);
  double v = 0.0;
  if (worst_row) *worst_row = -1;
  for (int i = 0; i < c.size(); ++i) {
    const double vi = std::max(p.con_lower()[i] - c[i], c[i] - p.con_upper()[i]);
    if (vi > v) {
      v = vi;
      if (worst_row) *worst_row = i;
    }
  }
  for (int i = 0; i < x.size(); ++i) {
    const double vi = std::max(p.var_lower()[i] - x[i], x[i] - p.var_upper()[i]);
    if (vi > v) {
      v = vi;
      if (worst_row) *worst_row = -2 - i;  // negative codes flag variable bounds
    }
  }
  return std::max(v, 0.0);
}

// Push a point strictly inside its box.  The pad is kept tiny so a carefully
// constructed guess that rides a bound is not perturbed into infeasibility.
double interior(double v, double lo, double hi) {
  if (lo > -kInf && hi < kInf) {
    const double pad = std::min(1e-6 * (hi - lo), 1e-6 * (1.0 + std::min(std::abs(lo), std::abs(hi))));
    return std::clamp(v, lo + pad, hi - pad);
  }
  if (lo > -kInf) return std::max(v, lo + 1e-6 * (1.0 + std::abs(lo)));
  if (hi < kInf) return std::min(v, hi - 1e-6 * (1.0 + std::abs(hi)));
  return v;
}

}  // namespace

std::string to_string(NlpStatus s) {
  switch (s) {
    case NlpStatus::optimal: return "optimal";
    case NlpStatus::feasible_suboptimal: return "feasible-suboptimal";
    case NlpStatus::iteration_limit: return "iteration-limit";
    case NlpStatus::infeasible: return "infeasible";
    case NlpStatus::evaluation_fault: return "evaluation-fault";
  }
  return "unknown";
}

NlpSolution solve_nlp(const NlpProblem& problem, const Eigen::VectorXd& x0,
                      const NlpOptions& opts) {
  NlpSolution sol;
  const int n = problem.num_vars();
  const int m = problem.num_cons();
  if (x0.size() != n) throw std::invalid_argument("solve_nlp: guess size mismatch");

  CoreProblem cp;
  cp.user = &problem;
  cp.n = n;
  cp.m = m;

  // ---- Scaling from the initial guess.
  try {
    cp.scal.sx = Eigen::VectorXd::Ones(n);
    for (int i = 0; i < n; ++i) cp.scal.sx[i] = std::max(1.0, std::abs(x0[i]));
    const Eigen::SparseMatrix<double> J0 = problem.jacobian(x0);
    Eigen::VectorXd row_norm = Eigen::VectorXd::Zero(m);
    for (int k = 0; k < J0.outerSize(); ++k)
      for (Eigen::SparseMatrix<double>::InnerIterator it(J0, k); it; ++it)
        row_norm[it.row()] =
            std::max(row_norm[it.row()], std::abs(it.value() * cp.scal.sx[it.col()]));
    cp.scal.sc.resize(m);
    for (int i = 0; i < m; ++i) cp.scal.sc[i] = 1.0 / std::max(1.0, row_norm[i]);
    const Eigen::VectorXd g0 = problem.objective_gradient(x0).cwiseProduct(cp.scal.sx);
    cp.scal.sf = 1.0 / std::max(1.0, g0.lpNorm<Eigen::Infinity>());
  } catch (const EvaluationFault&) {
    sol.status = NlpStatus::evaluation_fault;
    sol.x = x0;
    return sol;
  }

  // ---- Classify rows, build slack layout and bounds on y.
  cp.slack_of_row.assign(m, -1);
  cp.rhs_eq.setZero(m);
  int ns = 0;
  for (int i = 0; i < m; ++i) {
    if (problem.con_lower()[i] == problem.con_upper()[i]) {
      cp.rhs_eq[i] = cp.scal.sc[i] * problem.con_lower()[i];
    } else {
      cp.slack_of_row[i] = ns++;
    }
  }
  cp.n_slack = ns;
  cp.N = n + ns;
  cp.yl.setConstant(cp.N, -kInf);
  cp.yu.setConstant(cp.N, kInf);
  for (int i = 0; i < n; ++i) {
    cp.yl[i] = problem.var_lower()[i] / cp.scal.sx[i];
    cp.yu[i] = problem.var_upper()[i] / cp.scal.sx[i];
  }
  for (int i = 0; i < m; ++i) {
    if (cp.slack_of_row[i] < 0) continue;
    cp.yl[n + cp.slack_of_row[i]] =
        problem.con_lower()[i] > -kInf ? cp.scal.sc[i] * problem.con_lower()[i] : -kInf;
    cp.yu[n + cp.slack_of_row[i]] =
        problem.con_upper()[i] < kInf ? cp.scal.sc[i] * problem.con_upper()[i] : kInf;
  }

  // ---- Initial point: interior in the box, slacks matched to c(x0).
  Eigen::VectorXd y(cp.N);
  for (int i = 0; i < n; ++i) y[i] = interior(x0[i] / cp.scal.sx[i], cp.yl[i], cp.yu[i]);
  try {
    const Eigen::VectorXd c0 = problem.constraints(cp.user_x(y));
    for (int i = 0; i < m; ++i)
      if (cp.slack_of_row[i] >= 0) {
        const int k = n + cp.slack_of_row[i];
        y[k] = interior(cp.scal.sc[i] * c0[i], cp.yl[k], cp.yu[k]);
      }
  } catch (const EvaluationFault&) {
    sol.status = NlpStatus::evaluation_fault;
    sol.x = x0;
    return sol;
  }

  std::vector<int> lo_idx, hi_idx;
  for (int i = 0; i < cp.N; ++i) {
    if (cp.yl[i] > -kInf) lo_idx.push_back(i);
    if (cp.yu[i] < kInf) hi_idx.push_back(i);
  }

  double mu = opts.mu_init;
  Eigen::VectorXd lambda = Eigen::VectorXd::Zero(m);
  Eigen::VectorXd zL = Eigen::VectorXd::Zero(cp.N), zU = Eigen::VectorXd::Zero(cp.N);
  // Cap the initial bound multipliers: a guess riding a bound would otherwise
  // start with z ~ mu/pad and poison the first KKT systems.
  for (int i : lo_idx) zL[i] = mu / std::max(y[i] - cp.yl[i], 1e-2);
  for (int i : hi_idx) zU[i] = mu / std::max(cp.yu[i] - y[i], 1e-2);

  double delta_w_last = 0.0;
  double nu = 1.0;  // merit penalty
  double last_alpha = 0.0, last_dw = 0.0;
  int iter = 0;
  double best_viol = kInf;
  Eigen::VectorXd best_x = cp.user_x(y);
  int consecutive_failures = 0;
  // Best feasible iterate seen, by objective: the fallback answer whenever the
  // iteration ends somewhere worse.
  const double feas_ok = std::max(opts.feas_tol, 1e-6);
  double best_feas_f = kInf;
  Eigen::VectorXd best_feas_x;
  // Stall watchdog marks.
  int tiny_alpha_count = 0;
  double mark_f = kInf, mark_viol = kInf;
  int mark_iter = 0;

  auto barrier_value = [&](const Eigen::VectorXd& yy) {
    double b = cp.f(yy);
    for (int i : lo_idx) {
      const double d = yy[i] - cp.yl[i];
      if (d <= 0.0) return kInf;
      b -= mu * std::log(d);
    }
    for (int i : hi_idx) {
      const double d = cp.yu[i] - yy[i];
      if (d <= 0.0) return kInf;
      b -= mu * std::log(d);
    }
    return b;
  };

  auto finish_x = [&](NlpStatus status, const Eigen::VectorXd& xu) {
    sol.status = status;
    sol.x = xu;
    sol.lambda.resize(m);
    for (int i = 0; i < m; ++i) sol.lambda[i] = cp.scal.sc[i] * lambda[i] / cp.scal.sf;
    try {
      sol.objective = problem.objective(sol.x);
      sol.max_violation = unscaled_violation(problem, sol.x);
    } catch (const EvaluationFault&) {
      sol.status = NlpStatus::evaluation_fault;
    }
    sol.iterations = iter;
    return sol;
  };
  auto finish = [&](NlpStatus status, const Eigen::VectorXd& yy) {
    return finish_x(status, cp.user_x(yy));
  };
  // Non-optimal exit: return the best feasible iterate seen if the current
  // point is infeasible or has a worse objective.
  auto finish_stalled = [&](const Eigen::VectorXd& yy, NlpStatus infeasible_status) {
    Eigen::VectorXd xu = cp.user_x(yy);
    double v = kInf, fv = kInf;
    try {
      v = unscaled_violation(problem, xu);
      fv = problem.objective(xu);
    } catch (const EvaluationFault&) {
    }
    if (best_feas_f < kInf && (v > feas_ok || fv > best_feas_f))
      return finish_x(NlpStatus::feasible_suboptimal, best_feas_x);
    return finish_x(v <= feas_ok ? NlpStatus::feasible_suboptimal : infeasible_status, xu);
  };

  // Symmetric indefinite KKT solves.  LDL^T without pivoting is stable once
  // the regularization makes the matrix quasi-definite, and the signs of D
  // then give the exact inertia needed for the correction loop.
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;

  for (iter = 0; iter < opts.max_iter; ++iter) {
    Eigen::VectorXd E, gf;
    Eigen::SparseMatrix<double> A, W;
    try {
      E = cp.residual(y);
      gf = cp.grad(y);
      A = cp.jac(y);
      W = cp.hess(y, lambda);
    } catch (const EvaluationFault&) {
      return finish(NlpStatus::evaluation_fault, y);
    }

    // ---- Convergence measures.
    Eigen::VectorXd dual = gf - A.transpose() * lambda;
    for (int i : lo_idx) dual[i] -= zL[i];
    for (int i : hi_idx) dual[i] += zU[i];
    const double z_sum = zL.lpNorm<1>() + zU.lpNorm<1>() + lambda.lpNorm<1>();
    const double sd =
        std::max(100.0, z_sum / std::max(1, cp.N + m)) / 100.0;
    const double dual_inf = dual.lpNorm<Eigen::Infinity>() / sd;
    double comp = 0.0;
    for (int i : lo_idx) comp = std::max(comp, std::abs(zL[i] * (y[i] - cp.yl[i]) - mu));
    for (int i : hi_idx) comp = std::max(comp, std::abs(zU[i] * (cp.yu[i] - y[i]) - mu));
    double comp0 = 0.0;  // complementarity against mu = 0
    for (int i : lo_idx) comp0 = std::max(comp0, zL[i] * (y[i] - cp.yl[i]));
    for (int i : hi_idx) comp0 = std::max(comp0, zU[i] * (cp.yu[i] - y[i]));
    comp0 /= sd;

    double viol;
    int worst = -1;
    try {
      viol = unscaled_violation(problem, cp.user_x(y), &worst);
    } catch (const EvaluationFault&) {
      return finish(NlpStatus::evaluation_fault, y);
    }
    if (viol < best_viol) {
      best_viol = viol;
      best_x = cp.user_x(y);
    }
    const double f_now = cp.f(y) / cp.scal.sf;
    if (viol <= feas_ok && f_now < best_feas_f) {
      best_feas_f = f_now;
      best_feas_x = cp.user_x(y);
    }

    // Stall watchdog: exit if neither feasibility nor objective has moved in a
    // long while (a jammed line search would otherwise burn the whole budget).
    if (viol < 0.9 * mark_viol || f_now < mark_f - 1e-7 * std::max(1.0, std::abs(mark_f))) {
      mark_viol = std::min(mark_viol, viol);
      mark_f = std::min(mark_f, f_now);
      mark_iter = iter;
    }
    if (iter - mark_iter > 300 || tiny_alpha_count >= 15)
      return finish_stalled(y, NlpStatus::iteration_limit);

    if (opts.verbose && iter % 10 == 0)
      std::printf(
          "it %4d  mu %8.1e  viol %9.2e @%d  dual %9.2e  comp %9.2e  f %13.6e  a %7.1e  dw "
          "%7.1e  nu %7.1e  E1 %9.2e\n",
          iter, mu, viol, worst, dual_inf, comp0, problem.objective(cp.user_x(y)), last_alpha,
          last_dw, nu, E.lpNorm<1>());

    if (viol <= opts.feas_tol && dual_inf <= opts.opt_tol && comp0 <= opts.opt_tol)
      return finish(NlpStatus::optimal, y);

    // ---- Barrier parameter update.
    const double err_mu = std::max({dual_inf, comp, E.lpNorm<Eigen::Infinity>()});
    if (err_mu <= 10.0 * mu && mu > opts.opt_tol / 20.0) {
      mu = std::max(opts.opt_tol / 20.0, std::min(0.2 * mu, std::pow(mu, 1.5)));
      continue;  // re-enter with the new barrier
    }

    // ---- Factor the KKT system, raising delta_w until the inertia is the
    // required (N positive, m negative).
    Eigen::VectorXd sigma = Eigen::VectorXd::Zero(cp.N);
    for (int i : lo_idx) sigma[i] += zL[i] / (y[i] - cp.yl[i]);
    for (int i : hi_idx) sigma[i] += zU[i] / (cp.yu[i] - y[i]);
    // Cap the barrier curvature: a variable crushed against its bound would
    // otherwise drive sigma toward 1/d^2 and make the KKT system numerically
    // singular, freezing the iteration.
    for (int i = 0; i < cp.N; ++i) sigma[i] = std::min(sigma[i], 1e10);

    const double delta_c = 1e-8;
    double delta_w = 0.0;
    bool have_fact = false;
    for (int attempt = 0; attempt < 30 && !have_fact; ++attempt) {
      std::vector<Eigen::Triplet<double>> trip;
      trip.reserve(W.nonZeros() + A.nonZeros() + cp.N + m);
      for (int k = 0; k < W.outerSize(); ++k)
        for (Eigen::SparseMatrix<double>::InnerIterator it(W, k); it; ++it)
          trip.emplace_back(it.row(), it.col(), it.value());
      for (int i = 0; i < cp.N; ++i) trip.emplace_back(i, i, sigma[i] + delta_w);
      for (int k = 0; k < A.outerSize(); ++k)
        for (Eigen::SparseMatrix<double>::InnerIterator it(A, k); it; ++it) {
          trip.emplace_back(cp.N + it.row(), it.col(), it.value());
          trip.emplace_back(it.col(), cp.N + it.row(), it.value());
        }
      for (int i = 0; i < m; ++i) trip.emplace_back(cp.N + i, cp.N + i, -delta_c);
      Eigen::SparseMatrix<double> K(cp.N + m, cp.N + m);
      K.setFromTriplets(trip.begin(), trip.end());

      ldlt.compute(K);
      bool ok = ldlt.info() == Eigen::Success;
      if (ok) {
        const Eigen::VectorXd& D = ldlt.vectorD();
        int neg = 0;
        for (int i = 0; i < D.size(); ++i) {
          if (!std::isfinite(D[i]) || D[i] == 0.0) {
            ok = false;
            break;
          }
          if (D[i] < 0.0) ++neg;
        }
        if (ok && neg != m) ok = false;
      }
      if (ok) {
        have_fact = true;
      } else {
        delta_w = delta_w == 0.0 ? std::max(1e-8, delta_w_last / 3.0) : delta_w * 10.0;
      }
    }
    if (!have_fact) return finish_stalled(y, NlpStatus::infeasible);
    delta_w_last = delta_w;

    // ---- Least-squares initial multipliers from the first factorization.
    if (iter == 0) {
      Eigen::VectorXd gz = gf;
      for (int i : lo_idx) gz[i] -= zL[i];
      for (int i : hi_idx) gz[i] += zU[i];
      Eigen::VectorXd r0 = Eigen::VectorXd::Zero(cp.N + m);
      r0.head(cp.N) = -gz;
      const Eigen::VectorXd s0 = ldlt.solve(r0);
      const Eigen::VectorXd lam0 = -s0.tail(m);
      if (lam0.allFinite() && lam0.lpNorm<Eigen::Infinity>() <= 1e3) lambda = lam0;
    }

    Eigen::VectorXd rhs(cp.N + m);
    Eigen::VectorXd rhs_y = -gf + A.transpose() * lambda;
    for (int i : lo_idx) rhs_y[i] += mu / (y[i] - cp.yl[i]);
    for (int i : hi_idx) rhs_y[i] -= mu / (cp.yu[i] - y[i]);
    rhs.head(cp.N) = rhs_y;
    rhs.tail(m) = -E;

    const Eigen::VectorXd step = ldlt.solve(rhs);
    if (!step.allFinite()) return finish_stalled(y, NlpStatus::infeasible);
    Eigen::VectorXd dy = step.head(cp.N);
    Eigen::VectorXd w = step.tail(m);

    Eigen::VectorXd dlambda = -w;

    // ---- Primal fraction-to-boundary.
    const double tau = std::max(0.99, 1.0 - mu);
    auto primal_ftb = [&](const Eigen::VectorXd& d) {
      double a = 1.0;
      for (int i : lo_idx)
        if (d[i] < 0.0) a = std::min(a, -tau * (y[i] - cp.yl[i]) / d[i]);
      for (int i : hi_idx)
        if (d[i] > 0.0) a = std::min(a, tau * (cp.yu[i] - y[i]) / d[i]);
      return a;
    };
    double alpha_max = primal_ftb(dy);

    // ---- l1-merit line search.
    Eigen::VectorXd grad_phi = gf;
    for (int i : lo_idx) grad_phi[i] -= mu / (y[i] - cp.yl[i]);
    for (int i : hi_idx) grad_phi[i] += mu / (cp.yu[i] - y[i]);
    const double phi0 = barrier_value(y);
    const double e1 = E.lpNorm<1>();
    // Penalty large enough that the step's model predicts merit descent,
    // with slow decay so one ill-conditioned multiplier estimate cannot
    // poison every later line search.
    if (e1 > 1e-12) {
      const double quad = dy.dot(W * dy) + sigma.cwiseProduct(dy).dot(dy);
      const double nu_req =
          (grad_phi.dot(dy) + 0.5 * std::max(0.0, quad)) / (0.9 * e1);
      nu = std::clamp(std::max(1.0, nu_req), 0.1 * nu, 1e10);
    }
    const double merit0 = phi0 + nu * e1;
    const double dmerit = grad_phi.dot(dy) - nu * e1;

    auto trial_merit = [&](const Eigen::VectorXd& yy) {
      try {
        return barrier_value(yy) + nu * cp.residual(yy).lpNorm<1>();
      } catch (const EvaluationFault&) {
        return kInf;
      }
    };
    auto armijo_ok = [&](double merit_trial, double a) {
      return std::isfinite(merit_trial) &&
             merit_trial <= merit0 + 1e-4 * a * std::min(dmerit, 0.0);
    };

    double alpha = alpha_max;
    bool accepted = false;
    Eigen::VectorXd y_trial;
    for (int ls = 0; ls < 60 && !accepted; ++ls) {
      y_trial = y + alpha * dy;
      if (armijo_ok(trial_merit(y_trial), alpha)) {
        accepted = true;
        break;
      }
      if (ls == 0 && e1 > 1e-10) {
        // Second-order correction: re-solve with the constraint residual
        // evaluated at the trial point to cancel the curvature of the
        // constraint manifold (Maratos fix); same factorization.
        try {
          Eigen::VectorXd c_soc = alpha * E + cp.residual(y_trial);
          Eigen::VectorXd rhs2 = rhs;
          rhs2.tail(m) = -c_soc;
          const Eigen::VectorXd s2 = ldlt.solve(rhs2);
          if (s2.allFinite()) {
            const Eigen::VectorXd dy2 = s2.head(cp.N);
            const double a2 = primal_ftb(dy2);
            const Eigen::VectorXd yt2 = y + a2 * dy2;
            if (armijo_ok(trial_merit(yt2), a2)) {
              dy = dy2;
              dlambda = -s2.tail(m);
              alpha = a2;
              y_trial = yt2;
              accepted = true;
              break;
            }
          }
        } catch (const EvaluationFault&) {
        }
      }
      alpha *= 0.5;
      if (alpha < 1e-14) break;
    }
    if (!accepted) {
      if (++consecutive_failures >= 5) return finish_stalled(y, NlpStatus::infeasible);
      // Force curvature next round.
      delta_w_last = std::max(delta_w_last * 10.0, 1e-4);
      continue;
    }
    consecutive_failures = 0;
    tiny_alpha_count = alpha < 1e-8 ? tiny_alpha_count + 1 : 0;
    last_alpha = alpha;
    last_dw = delta_w;

    // ---- Dual steps from complementarity linearization of the accepted
    // direction, with their own fraction-to-boundary.
    Eigen::VectorXd dzL = Eigen::VectorXd::Zero(cp.N), dzU = Eigen::VectorXd::Zero(cp.N);
    double alpha_z = 1.0;
    for (int i : lo_idx) {
      const double d = y[i] - cp.yl[i];
      dzL[i] = (mu - zL[i] * dy[i]) / d - zL[i];
      if (dzL[i] < 0.0) alpha_z = std::min(alpha_z, -tau * zL[i] / dzL[i]);
    }
    for (int i : hi_idx) {
      const double d = cp.yu[i] - y[i];
      dzU[i] = (mu + zU[i] * dy[i]) / d - zU[i];
      if (dzU[i] < 0.0) alpha_z = std::min(alpha_z, -tau * zU[i] / dzU[i]);
    }

    y = y_trial;
    lambda += alpha * dlambda;
    zL += alpha_z * dzL;
    zU += alpha_z * dzU;
    // Keep duals compatible with the barrier (IPOPT's kappa_Sigma safeguard).
    const double kappa = 1e10;
    for (int i : lo_idx) {
      const double d = y[i] - cp.yl[i];
      zL[i] = std::clamp(zL[i], mu / (kappa * d), kappa * mu / d);
    }
    for (int i : hi_idx) {
      const double d = cp.yu[i] - y[i];
      zU[i] = std::clamp(zU[i], mu / (kappa * d), kappa * mu / d);
    }
  }

  // Iteration limit: report the best point seen, flagging feasibility honestly.
  return finish_stalled(y, NlpStatus::iteration_limit);
}

}  // namespace ares
