#pragma once

#include <array>

#include "jcbell/hybrid.hpp"

namespace jcbell {

// Pauli block decomposition rho = (1/2)[1 (x) beta0 + sum_i sigma_i (x) beta_i]
// with beta_i = Tr_A(rho (sigma_i (x) 1_d)). All four blocks are d x d Hermitian.
struct BetaDecomposition {
  Eigen::MatrixXcd beta0;
  Eigen::MatrixXcd beta1;
  Eigen::MatrixXcd beta2;
  Eigen::MatrixXcd beta3;

  int dim() const { return static_cast<int>(beta0.rows()); }

  // (1/2)[1 (x) beta0 + sum sigma_i (x) beta_i] as a HybridDensityMatrix.
  HybridDensityMatrix reconstruct() const;
};

// SO(3) search used to maximize the CHSH value: coarse Z-Y-Z Euler grid of
// coarse_steps^3 points followed by Nelder-Mead refinement of the best seeds.
struct RotationScanConfig {
  int coarse_steps = 24;
  int refine_iters = 200;
  double refine_tol = 1e-9;
};

struct BellResult {
  double value = 0.0;                    // <O_Bell>_max
  std::array<double, 3> euler{0, 0, 0};  // optimal Z-Y-Z angles
  double sum1 = 0.0;                     // sum_i |lambda_i^(1)| at the optimum
  double sum2 = 0.0;                     // sum_i |lambda_i^(2)|
};

// Extracts the four beta blocks. Throws NumericalError if rho is not
// Hermitian within 1e-10 (entrywise).
BetaDecomposition decompose(const HybridDensityMatrix& rho);

// Maximal CHSH value 2 max_R sqrt[ (sum|l^(1)(R)|)^2 + (sum|l^(2)(R)|)^2 ]
// where l^(1,2)(R) are the eigenvalues of the first two rotated beta blocks.
// Deterministic for a fixed config; the identity rotation is always among the
// evaluated candidates, so the result dominates identity_lower_bound(rho).
BellResult bell_max_scan(const HybridDensityMatrix& rho,
                         const RotationScanConfig& cfg = {});

// The scan objective at R = identity: 2 sqrt(||beta1||_1^2 + ||beta2||_1^2).
double identity_lower_bound(const HybridDensityMatrix& rho);

// Closed form for pure states:
//   2 sqrt(1 + 4(<g|g><e|e> - |<g|e>|^2)),  <.|.> over the field components.
// Throws NumericalError if the state norm is off by more than 1e-8.
double bell_max_pure(const HybridPureState& state);

// Closed form for an initial |e>|k> under Gaussian coupling noise:
//   2 sqrt(1 + e^{-4(k+1) t^2 sigma^2} sin^2(2 sqrt(k+1) t lambda_bar)).
double bell_max_fock_noisy(int k, double lambda_bar, double sigma, double t);

}  // namespace jcbell
