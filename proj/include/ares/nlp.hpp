// Sparse NLP interface and a primal-dual interior-point solver.
//
//   minimize f(x)   s.t.  cl <= c(x) <= cu,  xl <= x <= xu
//
// Ranged constraint rows are converted internally to equalities with slack
// variables; bounds enter through a logarithmic barrier.  The solver works on
// an internally scaled copy of the problem (variables by bound range or guess
// magnitude, constraint rows by initial Jacobian row norms) and reports the
// unscaled constraint violation of the returned point.
#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <string>

namespace ares {

class NlpProblem {
 public:
  virtual ~NlpProblem() = default;

  virtual int num_vars() const = 0;
  virtual int num_cons() const = 0;
  virtual const Eigen::VectorXd& var_lower() const = 0;
  virtual const Eigen::VectorXd& var_upper() const = 0;
  virtual const Eigen::VectorXd& con_lower() const = 0;
  virtual const Eigen::VectorXd& con_upper() const = 0;

  // Each evaluator may throw EvaluationFault for iterates outside the domain
  // of the model; the solver treats that as a rejected trial point.
  virtual double objective(const Eigen::VectorXd& x) const = 0;
  virtual Eigen::VectorXd objective_gradient(const Eigen::VectorXd& x) const = 0;
  virtual Eigen::VectorXd constraints(const Eigen::VectorXd& x) const = 0;
  virtual Eigen::SparseMatrix<double> jacobian(const Eigen::VectorXd& x) const = 0;
  /// sigma * grad^2 f + sum_i lambda_i grad^2 c_i (full symmetric matrix).
  virtual Eigen::SparseMatrix<double> lagrangian_hessian(const Eigen::VectorXd& x,
                                                         const Eigen::VectorXd& lambda,
                                                         double sigma) const = 0;
};

enum class NlpStatus {
  optimal,              ///< feasibility and optimality tolerances both met
  feasible_suboptimal,  ///< feasible to tolerance, optimality stalled
  iteration_limit,
  infeasible,           ///< converged to an infeasible point
  evaluation_fault      ///< model evaluation failed irrecoverably
};

std::string to_string(NlpStatus s);

struct NlpOptions {
  double feas_tol = 1e-8;   ///< unscaled max constraint violation
  double opt_tol = 1e-6;    ///< scaled dual infeasibility
  int max_iter = 3000;
  double mu_init = 0.1;     ///< initial barrier parameter
  bool verbose = false;
};

struct NlpSolution {
  NlpStatus status = NlpStatus::evaluation_fault;
  Eigen::VectorXd x;
  Eigen::VectorXd lambda;   ///< multipliers of the constraint rows (unscaled)
  double objective = 0.0;
  double max_violation = 0.0;  ///< recomputed, unscaled
  double dual_infeasibility = 0.0;
  int iterations = 0;
};

NlpSolution solve_nlp(const NlpProblem& problem, const Eigen::VectorXd& x0,
                      const NlpOptions& opts = {});

}  // namespace ares
