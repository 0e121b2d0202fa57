#pragma once

#include <Eigen/Dense>

#include "jcbell/fock_space.hpp"

namespace jcbell {

// Pure atom-field state |g>|phi_g> + |e>|phi_e>. The two field components
// share one truncation dimension and jointly carry unit norm:
// <phi_g|phi_g> + <phi_e|phi_e> = 1.
struct HybridPureState {
  FockVector phi_g;
  FockVector phi_e;

  HybridPureState() = default;
  HybridPureState(FockVector g, FockVector e);

  int dim() const { return phi_g.dim(); }
  double norm2() const { return phi_g.norm2() + phi_e.norm2(); }
};

// Throws NumericalError if the state norm deviates from 1 beyond tol.
void require_normalized(const HybridPureState& state, double tol = 1e-8);

// Mixed atom-field state in block form, atom basis ordered (|e>, |g>):
//   rho = |e><e| (x) ee + |e><g| (x) eg + |g><e| (x) eg^dag + |g><g| (x) gg.
// ee and gg are Hermitian; the full 2d x 2d matrix is Hermitian, PSD within
// tolerance, and has unit trace.
struct HybridDensityMatrix {
  Eigen::MatrixXcd ee;
  Eigen::MatrixXcd eg;
  Eigen::MatrixXcd gg;

  int dim() const { return static_cast<int>(ee.rows()); }
  double trace() const { return ee.real().trace() + gg.real().trace(); }

  // Assembled 2d x 2d matrix, rows/cols ordered e-block first.
  Eigen::MatrixXcd full() const;

  static HybridDensityMatrix zero(int dim);

  // Rank-1 projector |psi><psi|.
  static HybridDensityMatrix pure(const HybridPureState& psi);
};

// Validates hermiticity, unit trace and PSD-ness (min eigenvalue >= -psd_tol).
// Throws NumericalError naming the violated property.
void validate(const HybridDensityMatrix& rho, double herm_tol = 1e-10,
              double trace_tol = 1e-10, double psd_tol = 1e-10);

}  // namespace jcbell
