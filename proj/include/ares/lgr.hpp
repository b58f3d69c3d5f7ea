// Legendre-Gauss-Radau collocation primitives: node/weight computation via
// the Golub-Welsch eigenvalue method and barycentric differentiation matrices
// on the support set {LGR nodes, +1}.
#pragma once

#include <Eigen/Core>
#include <vector>

namespace ares {

/// One collocation rule of a given degree d on [-1, 1].
/// nodes: the d LGR points (includes -1, excludes +1), strictly increasing.
/// support: nodes plus the non-collocated endpoint +1 (d+1 entries).
/// diff: d x (d+1) matrix; row i gives the derivative of the interpolating
/// polynomial on the support points, evaluated at nodes[i].
struct RadauRule {
  int degree;
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
  Eigen::VectorXd support;
  Eigen::MatrixXd diff;
};

/// Computes (and caches) the rule for a degree.  Degree must be >= 2.
const RadauRule& radau_rule(int degree);

/// Barycentric weights for an arbitrary point set.
Eigen::VectorXd barycentric_weights(const Eigen::VectorXd& points);

/// Evaluate the Lagrange basis at x for the given points/barycentric weights.
Eigen::VectorXd lagrange_basis(const Eigen::VectorXd& points, const Eigen::VectorXd& bary,
                               double x);

}  // namespace ares
