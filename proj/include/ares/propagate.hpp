// Adaptive Dormand-Prince 5(4) integration, used as the independent oracle
// for defects, open-loop replays, and initial-guess construction.
#pragma once

#include <Eigen/Core>
#include <functional>
#include <vector>

namespace ares {

using OdeRhs = std::function<Eigen::VectorXd(double t, const Eigen::VectorXd& x)>;

struct OdeOptions {
  double rtol = 1e-12;
  double atol = 1e-12;
  double initial_step = 0.0;  // 0 -> automatic
  int max_steps = 2'000'000;
};

struct OdeTrajectory {
  std::vector<double> t;
  std::vector<Eigen::VectorXd> x;
};

/// Integrates from t0 to t1 (t1 > t0), recording every accepted step.
OdeTrajectory integrate(const OdeRhs& rhs, const Eigen::VectorXd& x0, double t0, double t1,
                        const OdeOptions& opts = {});

/// Final state only.
Eigen::VectorXd integrate_to(const OdeRhs& rhs, const Eigen::VectorXd& x0, double t0, double t1,
                             const OdeOptions& opts = {});

/// States sampled at the given (increasing) times; times[0] may equal t0.
std::vector<Eigen::VectorXd> integrate_at(const OdeRhs& rhs, const Eigen::VectorXd& x0, double t0,
                                          const std::vector<double>& times,
                                          const OdeOptions& opts = {});

}  // namespace ares
