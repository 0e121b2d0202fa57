#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "jcbell/hybrid.hpp"

namespace jcbell {

enum class EntropyBase { bits, nats };

// Schmidt angle theta in [0, pi/4]: the state is locally equivalent to
// cos(theta)|00> + sin(theta)|11>.
struct SchmidtData {
  double theta = 0.0;
  double cos_theta = 1.0;
  double sin_theta = 0.0;
};

// Negative-eigenvalue certificate for the asymptotic state of a separable
// coherent input (all parameters real). n_star is the field mode whose
// 2x2 partial-transpose block carries the most negative eigenvalue mu_minus.
struct WitnessReport {
  int n_star = 0;
  double mu_minus = 0.0;
  double a11 = 0.0, a12 = 0.0, a22 = 0.0;  // the 2x2 block at n_star
  double p_of_n = 0.0;                     // P(n_star), the det sign polynomial
};

// Reduced 2x2 atom matrix [[<g|g>, <e|g>], [<g|e>, <e|e>]] over the field
// components.
Eigen::Matrix2cd reduced_atom_matrix(const HybridPureState& state);

// Entanglement entropy -Tr(rho_A log rho_A) of a normalized pure state.
// Defaults to bits (range [0,1]); EntropyBase::nats selects natural log.
double von_neumann_entropy(const HybridPureState& state,
                           EntropyBase base = EntropyBase::bits);

SchmidtData schmidt_angle(const HybridPureState& state);

// Exact parametric (S_vN, <O_Bell>_max) relation over theta in [0, pi/4]:
//   S = -cos^2 log2 cos^2 - sin^2 log2 sin^2,  O = 2 sqrt(1 + sin^2 2theta).
// Throws ConfigError for theta outside the range.
std::vector<std::pair<double, double>> entropy_bell_curve(
    const std::vector<double>& theta_grid);

// Partial transpose over the field indices: blocks (ee, eg, gg) ->
// (ee^T, eg^T, gg^T). Returns the assembled 2d x 2d Hermitian matrix.
Eigen::MatrixXcd partial_transpose(const HybridDensityMatrix& rho);

// Same map on an assembled 2d x 2d matrix (an involution).
Eigen::MatrixXcd partial_transpose(const Eigen::MatrixXcd& full, int dim);

// Minimum eigenvalue of partial_transpose(rho); negative certifies
// entanglement. Asymptotic-form matrices (diagonal ee/gg, single-superdiagonal
// eg) are solved exactly via their invariant 2x2 blocks; anything else goes
// through a dense Hermitian eigensolve.
double ppt_min_eigenvalue(const HybridDensityMatrix& rho);

// Entanglement certificate for the asymptotic state of |psi(0)> =
// (c_g|g> + c_e|e>) (x) |alpha>, all real, c_g^2 + c_e^2 = 1, c_e != 0.
// Returns nullopt when no witness applies (c_g = 0 or alpha = 0, where the
// asymptotic state is separable, or when the eigenvalue underflows to zero).
std::optional<WitnessReport> coherent_witness(double c_g, double c_e,
                                              double alpha);

}  // namespace jcbell
