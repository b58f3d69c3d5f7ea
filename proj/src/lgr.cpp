#include "ares/lgr.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <map>
#include <mutex>
#include <stdexcept>

namespace ares {

namespace {

// Golub-Welsch for the left Gauss-Radau rule of the Legendre weight on [-1,1]:
// the Jacobi matrix of the monic three-term recurrence with its last diagonal
// entry modified so that -1 becomes a node.
RadauRule compute_rule(int n) {
  if (n < 2) throw std::invalid_argument("radau degree must be >= 2");

  // Monic Legendre recurrence coefficients: alpha_k = 0, beta_0 = 2,
  // beta_k = k^2 / (4k^2 - 1).
  Eigen::VectorXd beta(n);
  beta[0] = 2.0;
  for (int k = 1; k < n; ++k) beta[k] = k * k / (4.0 * k * k - 1.0);

  // p_{n-1}(-1), p_{n-2}(-1) from the monic recurrence.
  double pm2 = 0.0, pm1 = 1.0;  // p_{-1}, p_0
  for (int k = 1; k <= n - 1; ++k) {
    const double p = -1.0 * pm1 - beta[k - 1] * pm2;
    // note beta_0 multiplies p_{-1} = 0, harmless
    pm2 = pm1;
    pm1 = p;
  }
  const double alpha_last = -1.0 - beta[n - 1] * pm2 / pm1;

  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    const double b = std::sqrt(beta[k]);
    J(k - 1, k) = b;
    J(k, k - 1) = b;
  }
  J(n - 1, n - 1) = alpha_last;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  RadauRule rule;
  rule.degree = n;
  rule.nodes = es.eigenvalues();
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    const double v0 = es.eigenvectors()(0, i);
    rule.weights[i] = beta[0] * v0 * v0;
  }
  // Eigenvalues come out sorted; pin the -1 node exactly.
  rule.nodes[0] = -1.0;

  rule.support.resize(n + 1);
  rule.support.head(n) = rule.nodes;
  rule.support[n] = 1.0;

  const Eigen::VectorXd w = barycentric_weights(rule.support);
  rule.diff.resize(n, n + 1);
  for (int i = 0; i < n; ++i) {
    double row_sum = 0.0;
    for (int j = 0; j <= n; ++j) {
      if (j == i) continue;
      const double d = (w[j] / w[i]) / (rule.support[i] - rule.support[j]);
      rule.diff(i, j) = d;
      row_sum += d;
    }
    rule.diff(i, i) = -row_sum;
  }
  return rule;
}

}  // namespace

const RadauRule& radau_rule(int degree) {
  static std::map<int, RadauRule> cache;
  static std::mutex mutex;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(degree);
  if (it == cache.end()) it = cache.emplace(degree, compute_rule(degree)).first;
  return it->second;
}

Eigen::VectorXd barycentric_weights(const Eigen::VectorXd& points) {
  const int n = static_cast<int>(points.size());
  Eigen::VectorXd w = Eigen::VectorXd::Ones(n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      if (k != j) w[j] /= (points[j] - points[k]);
  return w;
}

Eigen::VectorXd lagrange_basis(const Eigen::VectorXd& points, const Eigen::VectorXd& bary,
                               double x) {
  const int n = static_cast<int>(points.size());
  Eigen::VectorXd ell = Eigen::VectorXd::Zero(n);
  for (int j = 0; j < n; ++j) {
    if (x == points[j]) {
      ell[j] = 1.0;
      return ell;
    }
  }
  double denom = 0.0;
  for (int j = 0; j < n; ++j) {
    ell[j] = bary[j] / (x - points[j]);
    denom += ell[j];
  }
  ell /= denom;
  return ell;
}

}  // namespace ares
