#pragma once

#include "jcbell/hybrid.hpp"

namespace jcbell {

// Gaussian uncertainty on the atom-field coupling: lambda ~ N(lambda_bar, sigma).
// sigma = 0 degenerates to a point mass at lambda_bar.
struct NoiseModel {
  double lambda_bar = 1.0;
  double sigma = 0.0;
  int quad_order = 41;
};

// Resonant Jaynes-Cummings evolution of a pure hybrid state for time t at
// coupling lambda. Component form:
//   phi_g'[n] = phi_g[n] cos(sqrt(n) lambda t)   - i phi_e[n-1] sin(sqrt(n) lambda t)
//   phi_e'[n] = phi_e[n] cos(sqrt(n+1) lambda t) - i phi_g[n+1] sin(sqrt(n+1) lambda t)
// with phi_e[-1] = 0 and out-of-range phi_g treated as 0. The output gains one
// mode of headroom; the norm is preserved exactly up to rounding.
HybridPureState evolve_pure(const HybridPureState& initial, double lambda, double t);

// Coupling-noise-averaged state rho(t) = integral dlambda P(lambda)
// |psi(lambda,t)><psi(lambda,t)|, evaluated by Gauss-Hermite quadrature of
// order noise.quad_order over the full real line.
HybridDensityMatrix noisy_density_matrix(const HybridPureState& initial,
                                         const NoiseModel& noise, double t);

// Closed-form t -> infinity limit of the noise-averaged state. Blocks:
//   ee[n,n]   = (|C_e,n|^2 + |C_g,n+1|^2) / 2
//   eg[n,n+1] = Re(C_g,n+1 C_e,n^*)
//   gg[n,n]   = (|C_g,n|^2 + |C_e,n-1|^2) / 2  (+ |C_g,0|^2/2 extra at n = 0)
HybridDensityMatrix asymptotic_density_matrix(const HybridPureState& initial);

}  // namespace jcbell
