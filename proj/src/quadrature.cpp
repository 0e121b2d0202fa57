#include "jcbell/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <map>
#include <mutex>

#include "jcbell/errors.hpp"

namespace jcbell {

namespace {

GaussHermiteRule build_rule(int order) {
  // Jacobi matrix of the (physicists') Hermite polynomials: zero diagonal,
  // off-diagonal b_k = sqrt(k/2). Nodes are its eigenvalues and the weights
  // are sqrt(pi) times the squared first eigenvector components.
  GaussHermiteRule rule;
  if (order == 1) {
    rule.nodes = Eigen::VectorXd::Zero(1);
    rule.weights = Eigen::VectorXd::Constant(1, std::sqrt(M_PI));
    return rule;
  }
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(order);
  Eigen::VectorXd sub(order - 1);
  for (int k = 1; k < order; ++k) sub[k - 1] = std::sqrt(0.5 * k);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  rule.nodes = es.eigenvalues();
  rule.weights = std::sqrt(M_PI) * es.eigenvectors().row(0).array().square();
  return rule;
}

}  // namespace

const GaussHermiteRule& gauss_hermite(int order) {
  if (order < 1) throw ConfigError("gauss_hermite: order must be >= 1");
  static std::map<int, GaussHermiteRule> cache;
  static std::mutex mutex;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, build_rule(order)).first;
  return it->second;
}

}  // namespace jcbell
