#include "ares/propagate.hpp"

#include <cmath>
#include <stdexcept>

namespace ares {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

struct Stepper {
  const OdeRhs& rhs;
  const OdeOptions& opts;
  Eigen::VectorXd k1, k2, k3, k4, k5, k6, k7;

  // One attempted step; returns the error norm and fills x_new.
  double attempt(double t, const Eigen::VectorXd& x, double h, Eigen::VectorXd& x_new) {
    k2 = rhs(t + c2 * h, x + h * (a21 * k1));
    k3 = rhs(t + c3 * h, x + h * (a31 * k1 + a32 * k2));
    k4 = rhs(t + c4 * h, x + h * (a41 * k1 + a42 * k2 + a43 * k3));
    k5 = rhs(t + c5 * h, x + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    k6 = rhs(t + h, x + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    x_new = x + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    k7 = rhs(t + h, x_new);
    const Eigen::VectorXd err =
        h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    double norm = 0.0;
    for (int i = 0; i < x.size(); ++i) {
      const double scale =
          opts.atol + opts.rtol * std::max(std::abs(x[i]), std::abs(x_new[i]));
      norm = std::max(norm, std::abs(err[i]) / scale);
    }
    return norm;
  }
};

}  // namespace

OdeTrajectory integrate(const OdeRhs& rhs, const Eigen::VectorXd& x0, double t0, double t1,
                        const OdeOptions& opts) {
  if (!(t1 >= t0)) throw std::invalid_argument("integrate: t1 < t0");
  OdeTrajectory traj;
  traj.t.push_back(t0);
  traj.x.push_back(x0);
  if (t1 == t0) return traj;

  Stepper st{rhs, opts, {}, {}, {}, {}, {}, {}, {}};
  double t = t0;
  Eigen::VectorXd x = x0;
  st.k1 = rhs(t, x);
  double h = opts.initial_step > 0.0 ? opts.initial_step : (t1 - t0) * 1e-4;
  h = std::min(h, t1 - t0);

  Eigen::VectorXd x_new;
  for (int step = 0; step < opts.max_steps; ++step) {
    const bool last = (t + h >= t1);
    if (last) h = t1 - t;
    const double err = st.attempt(t, x, h, x_new);
    if (err <= 1.0) {
      t = last ? t1 : t + h;
      x = x_new;
      st.k1 = st.k7;  // FSAL
      traj.t.push_back(t);
      traj.x.push_back(x);
      if (t >= t1) return traj;
    }
    const double factor =
        err > 0.0 ? std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0) : 5.0;
    h = std::min(h * factor, t1 - t);
    if (!(h > 0.0) || !std::isfinite(err))
      throw std::runtime_error("integrate: step size underflow");
  }
  throw std::runtime_error("integrate: max step count exceeded");
}

Eigen::VectorXd integrate_to(const OdeRhs& rhs, const Eigen::VectorXd& x0, double t0, double t1,
                             const OdeOptions& opts) {
  return integrate(rhs, x0, t0, t1, opts).x.back();
}

std::vector<Eigen::VectorXd> integrate_at(const OdeRhs& rhs, const Eigen::VectorXd& x0, double t0,
                                          const std::vector<double>& times,
                                          const OdeOptions& opts) {
  std::vector<Eigen::VectorXd> out;
  out.reserve(times.size());
  Eigen::VectorXd x = x0;
  double t = t0;
  for (double target : times) {
    if (target < t) throw std::invalid_argument("integrate_at: times must be increasing");
    if (target > t) x = integrate_to(rhs, x, t, target, opts);
    t = target;
    out.push_back(x);
  }
  return out;
}

}  // namespace ares
