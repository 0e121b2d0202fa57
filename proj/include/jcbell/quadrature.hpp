#pragma once

#include <Eigen/Dense>

namespace jcbell {

// Gauss-Hermite rule: sum_i w_i f(x_i) ~= integral e^{-x^2} f(x) dx,
// exact for polynomials up to degree 2n-1.
struct GaussHermiteRule {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
};

// Golub-Welsch construction from the Jacobi matrix of the Hermite
// polynomials. Results are cached per order.
const GaussHermiteRule& gauss_hermite(int order);

}  // namespace jcbell
