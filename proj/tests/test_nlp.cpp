#include <Eigen/Core>
#include <cmath>
#include <limits>

#include "ares/nlp.hpp"
#include "doctest.h"

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Small dense-problem adapter for hand-written test cases.
struct DenseProblem : ares::NlpProblem {
  Eigen::VectorXd xl, xu, cl, cu;
  std::function<double(const Eigen::VectorXd&)> fobj;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> fgrad;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> fcon;
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> fjac;
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&, const Eigen::VectorXd&, double)> fhess;

  int num_vars() const override { return static_cast<int>(xl.size()); }
  int num_cons() const override { return static_cast<int>(cl.size()); }
  const Eigen::VectorXd& var_lower() const override { return xl; }
  const Eigen::VectorXd& var_upper() const override { return xu; }
  const Eigen::VectorXd& con_lower() const override { return cl; }
  const Eigen::VectorXd& con_upper() const override { return cu; }
  double objective(const Eigen::VectorXd& x) const override { return fobj(x); }
  Eigen::VectorXd objective_gradient(const Eigen::VectorXd& x) const override { return fgrad(x); }
  Eigen::VectorXd constraints(const Eigen::VectorXd& x) const override { return fcon(x); }
  Eigen::SparseMatrix<double> jacobian(const Eigen::VectorXd& x) const override {
    return fjac(x).sparseView();
  }
  Eigen::SparseMatrix<double> lagrangian_hessian(const Eigen::VectorXd& x,
                                                 const Eigen::VectorXd& lambda,
                                                 double sigma) const override {
    return fhess(x, lambda, sigma).sparseView();
  }
};

}  // namespace

TEST_CASE("equality QP with an active bound") {
  // min (x-1)^2 + (y-2)^2  s.t.  x + y = 1,  x >= 0, y >= 0.
  // KKT gives (x, y) = (0, 1) with the x >= 0 bound active.
  DenseProblem p;
  p.xl = Eigen::Vector2d(0.0, 0.0);
  p.xu = Eigen::Vector2d(kInf, kInf);
  p.cl = Eigen::VectorXd::Constant(1, 1.0);
  p.cu = Eigen::VectorXd::Constant(1, 1.0);
  p.fobj = [](const Eigen::VectorXd& x) {
    return (x[0] - 1) * (x[0] - 1) + (x[1] - 2) * (x[1] - 2);
  };
  p.fgrad = [](const Eigen::VectorXd& x) {
    return Eigen::Vector2d(2 * (x[0] - 1), 2 * (x[1] - 2));
  };
  p.fcon = [](const Eigen::VectorXd& x) {
    return Eigen::VectorXd::Constant(1, x[0] + x[1]);
  };
  p.fjac = [](const Eigen::VectorXd&) {
    Eigen::MatrixXd J(1, 2);
    J << 1, 1;
    return J;
  };
  p.fhess = [](const Eigen::VectorXd&, const Eigen::VectorXd&, double sigma) {
    return (2.0 * sigma) * Eigen::MatrixXd::Identity(2, 2);
  };

  ares::NlpOptions tight;
  tight.opt_tol = 1e-9;
  const ares::NlpSolution s = ares::solve_nlp(p, Eigen::Vector2d(0.5, 0.5), tight);
  CHECK(s.status == ares::NlpStatus::optimal);
  // The bound is weakly active (its multiplier vanishes), so the distance to
  // the solution scales like sqrt(opt_tol).
  CHECK(std::abs(s.x[0]) < 2e-4);
  CHECK(s.x[1] == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(s.max_violation <= 1e-8);
}

TEST_CASE("minimum-time single integrator reaches the analytic duration") {
  // Variables: [T, x_0..x_N, u_0..u_{N-1}], Euler steps of xdot = u, u in
  // [0,1], x(0)=0, x(T)=1.  Optimal T = 1 with u = 1 throughout.
  const int N = 12;
  const int nT = 0, nx0 = 1, nu0 = nx0 + N + 1;
  DenseProblem p;
  const int nv = 1 + (N + 1) + N;
  p.xl = Eigen::VectorXd::Constant(nv, -kInf);
  p.xu = Eigen::VectorXd::Constant(nv, kInf);
  p.xl[nT] = 0.05;
  for (int i = 0; i < N; ++i) {
    p.xl[nu0 + i] = 0.0;
    p.xu[nu0 + i] = 1.0;
  }
  const int m = N + 2;  // N dynamics rows + 2 endpoint pins
  p.cl = Eigen::VectorXd::Zero(m);
  p.cu = Eigen::VectorXd::Zero(m);
  p.cl[m - 1] = p.cu[m - 1] = 1.0;
  p.fobj = [](const Eigen::VectorXd& x) { return x[0]; };
  p.fgrad = [nv](const Eigen::VectorXd&) {
    Eigen::VectorXd g = Eigen::VectorXd::Zero(nv);
    g[0] = 1.0;
    return g;
  };
  p.fcon = [=](const Eigen::VectorXd& x) {
    Eigen::VectorXd c(m);
    const double h = x[nT] / N;
    for (int i = 0; i < N; ++i)
      c[i] = x[nx0 + i + 1] - x[nx0 + i] - h * x[nu0 + i];
    c[N] = x[nx0];
    c[N + 1] = x[nx0 + N];
    return c;
  };
  p.fjac = [=](const Eigen::VectorXd& x) {
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(m, nv);
    const double h = x[nT] / N;
    for (int i = 0; i < N; ++i) {
      J(i, nx0 + i + 1) = 1.0;
      J(i, nx0 + i) = -1.0;
      J(i, nu0 + i) = -h;
      J(i, nT) = -x[nu0 + i] / N;
    }
    J(N, nx0) = 1.0;
    J(N + 1, nx0 + N) = 1.0;
    return J;
  };
  p.fhess = [=](const Eigen::VectorXd&, const Eigen::VectorXd& lam, double) {
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(nv, nv);
    for (int i = 0; i < N; ++i) {
      H(nT, nu0 + i) += -lam[i] / N;
      H(nu0 + i, nT) += -lam[i] / N;
    }
    return H;
  };

  Eigen::VectorXd x0 = Eigen::VectorXd::Zero(nv);
  x0[nT] = 2.0;
  for (int i = 0; i <= N; ++i) x0[nx0 + i] = static_cast<double>(i) / N;
  for (int i = 0; i < N; ++i) x0[nu0 + i] = 0.5;

  const ares::NlpSolution s = ares::solve_nlp(p, x0);
  CHECK(s.status == ares::NlpStatus::optimal);
  CHECK(s.x[nT] == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(s.max_violation <= 1e-8);
}

TEST_CASE("nonconvex ranged constraint settles on the nearest branch") {
  // min x  s.t.  1 <= x^2 <= 9,  x in [0.1, 3].  Optimum x = 1.
  DenseProblem p;
  p.xl = Eigen::VectorXd::Constant(1, 0.1);
  p.xu = Eigen::VectorXd::Constant(1, 3.0);
  p.cl = Eigen::VectorXd::Constant(1, 1.0);
  p.cu = Eigen::VectorXd::Constant(1, 9.0);
  p.fobj = [](const Eigen::VectorXd& x) { return x[0]; };
  p.fgrad = [](const Eigen::VectorXd&) { return Eigen::VectorXd::Constant(1, 1.0); };
  p.fcon = [](const Eigen::VectorXd& x) {
    return Eigen::VectorXd::Constant(1, x[0] * x[0]);
  };
  p.fjac = [](const Eigen::VectorXd& x) {
    return Eigen::MatrixXd::Constant(1, 1, 2 * x[0]);
  };
  p.fhess = [](const Eigen::VectorXd&, const Eigen::VectorXd& lam, double) {
    return Eigen::MatrixXd::Constant(1, 1, 2 * lam[0]);
  };

  const ares::NlpSolution s = ares::solve_nlp(p, Eigen::VectorXd::Constant(1, 2.5));
  CHECK(s.status == ares::NlpStatus::optimal);
  CHECK(s.x[0] == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("status strings are stable identifiers") {
  CHECK(ares::to_string(ares::NlpStatus::optimal) == "optimal");
  CHECK(ares::to_string(ares::NlpStatus::feasible_suboptimal) == "feasible-suboptimal");
  CHECK(ares::to_string(ares::NlpStatus::infeasible) == "infeasible");
}
