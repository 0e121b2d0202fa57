#include "jcbell/hybrid.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <string>

#include "jcbell/errors.hpp"

namespace jcbell {

HybridPureState::HybridPureState(FockVector g, FockVector e) {
  const int d = std::max(g.dim(), e.dim());
  phi_g = padded(std::move(g), d);
  phi_e = padded(std::move(e), d);
}

void require_normalized(const HybridPureState& state, double tol) {
  const double n2 = state.norm2();
  if (std::abs(n2 - 1.0) > tol)
    throw NumericalError("hybrid state norm^2 = " + std::to_string(n2) +
                         " deviates from 1 beyond tolerance");
}

Eigen::MatrixXcd HybridDensityMatrix::full() const {
  const int d = dim();
  Eigen::MatrixXcd m(2 * d, 2 * d);
  m.topLeftCorner(d, d) = ee;
  m.topRightCorner(d, d) = eg;
  m.bottomLeftCorner(d, d) = eg.adjoint();
  m.bottomRightCorner(d, d) = gg;
  return m;
}

HybridDensityMatrix HybridDensityMatrix::zero(int dim) {
  HybridDensityMatrix rho;
  rho.ee = Eigen::MatrixXcd::Zero(dim, dim);
  rho.eg = Eigen::MatrixXcd::Zero(dim, dim);
  rho.gg = Eigen::MatrixXcd::Zero(dim, dim);
  return rho;
}

HybridDensityMatrix HybridDensityMatrix::pure(const HybridPureState& psi) {
  HybridDensityMatrix rho;
  rho.ee = psi.phi_e.amps * psi.phi_e.amps.adjoint();
  rho.eg = psi.phi_e.amps * psi.phi_g.amps.adjoint();
  rho.gg = psi.phi_g.amps * psi.phi_g.amps.adjoint();
  return rho;
}

void validate(const HybridDensityMatrix& rho, double herm_tol, double trace_tol,
              double psd_tol) {
  const double herm =
      std::max((rho.ee - rho.ee.adjoint()).cwiseAbs().maxCoeff(),
               (rho.gg - rho.gg.adjoint()).cwiseAbs().maxCoeff());
  if (herm > herm_tol)
    throw NumericalError("density matrix not Hermitian: max deviation " +
                         std::to_string(herm));
  const double tr = rho.trace();
  if (std::abs(tr - 1.0) > trace_tol)
    throw NumericalError("density matrix trace " + std::to_string(tr) +
                         " != 1");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho.full(),
                                                     Eigen::EigenvaluesOnly);
  const double min_eig = es.eigenvalues().minCoeff();
  if (min_eig < -psd_tol)
    throw NumericalError("density matrix not PSD: min eigenvalue " +
                         std::to_string(min_eig));
}

}  // namespace jcbell
