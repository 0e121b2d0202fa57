#include "jcbell/jc_dynamics.hpp"

#include <cmath>

#include "jcbell/errors.hpp"
#include "jcbell/quadrature.hpp"

namespace jcbell {

HybridPureState evolve_pure(const HybridPureState& initial, double lambda,
                            double t) {
  const int d = initial.dim();
  const auto& g = initial.phi_g.amps;
  const auto& e = initial.phi_e.amps;
  const Complex mi(0.0, -1.0);

  HybridPureState out;
  out.phi_g.amps = Eigen::VectorXcd::Zero(d + 1);
  out.phi_e.amps = Eigen::VectorXcd::Zero(d + 1);
  for (int n = 0; n <= d; ++n) {
    // (e,n) <-> (g,n+1) Rabi pair; (g,0) is stationary.
    const double wg = std::sqrt(double(n)) * lambda * t;
    const Complex gn = (n < d) ? g[n] : Complex(0.0, 0.0);
    const Complex em1 = (n >= 1 && n - 1 < d) ? e[n - 1] : Complex(0.0, 0.0);
    out.phi_g.amps[n] = gn * std::cos(wg) + mi * em1 * std::sin(wg);

    const double we = std::sqrt(double(n + 1)) * lambda * t;
    const Complex en = (n < d) ? e[n] : Complex(0.0, 0.0);
    const Complex gp1 = (n + 1 < d) ? g[n + 1] : Complex(0.0, 0.0);
    out.phi_e.amps[n] = en * std::cos(we) + mi * gp1 * std::sin(we);
  }
  return out;
}

HybridDensityMatrix noisy_density_matrix(const HybridPureState& initial,
                                         const NoiseModel& noise, double t) {
  if (noise.quad_order < 1)
    throw ConfigError("noise.quad_order: must be >= 1");
  if (noise.sigma < 0) throw ConfigError("noise.sigma: must be >= 0");
  require_normalized(initial);

  if (noise.sigma == 0.0)
    return HybridDensityMatrix::pure(evolve_pure(initial, noise.lambda_bar, t));

  const GaussHermiteRule& rule = gauss_hermite(noise.quad_order);
  const double inv_sqrt_pi = 1.0 / std::sqrt(M_PI);
  HybridDensityMatrix rho = HybridDensityMatrix::zero(initial.dim() + 1);
  for (int i = 0; i < rule.nodes.size(); ++i) {
    const double lambda = noise.lambda_bar + std::sqrt(2.0) * noise.sigma * rule.nodes[i];
    const double w = rule.weights[i] * inv_sqrt_pi;
    const HybridPureState psi = evolve_pure(initial, lambda, t);
    rho.ee.noalias() += w * (psi.phi_e.amps * psi.phi_e.amps.adjoint());
    rho.eg.noalias() += w * (psi.phi_e.amps * psi.phi_g.amps.adjoint());
    rho.gg.noalias() += w * (psi.phi_g.amps * psi.phi_g.amps.adjoint());
  }
  return rho;
}

HybridDensityMatrix asymptotic_density_matrix(const HybridPureState& initial) {
  require_normalized(initial);
  const int d = initial.dim();
  const auto& g = initial.phi_g.amps;
  const auto& e = initial.phi_e.amps;
  auto g_at = [&](int n) { return (n >= 0 && n < d) ? g[n] : Complex(0.0, 0.0); };
  auto e_at = [&](int n) { return (n >= 0 && n < d) ? e[n] : Complex(0.0, 0.0); };

  HybridDensityMatrix rho = HybridDensityMatrix::zero(d + 1);
  for (int n = 0; n <= d; ++n) {
    rho.ee(n, n) = 0.5 * (std::norm(e_at(n)) + std::norm(g_at(n + 1)));
    rho.gg(n, n) = 0.5 * (std::norm(g_at(n)) + std::norm(e_at(n - 1)));
    if (n < d)
      rho.eg(n, n + 1) = std::real(g_at(n + 1) * std::conj(e_at(n)));
  }
  rho.gg(0, 0) += 0.5 * std::norm(g_at(0));
  return rho;
}

}  // namespace jcbell
