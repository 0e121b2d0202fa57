#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace jcbell {

using Complex = std::complex<double>;

// Controls how many Fock modes a state builder may keep and how much
// probability mass it is allowed to discard beyond the kept modes.
struct TruncationPolicy {
  int max_dim = 64;
  double tail_tol = 1e-12;
};

// Amplitude vector C_n, n = 0..dim-1, over a truncated Fock basis.
// Builders return norm <= 1; unnormalized vectors are permitted in general.
struct FockVector {
  Eigen::VectorXcd amps;

  int dim() const { return static_cast<int>(amps.size()); }
  double norm2() const { return amps.squaredNorm(); }
};

// |k>, with one extra mode of headroom for a creation operator.
FockVector make_fock(int k, const TruncationPolicy& policy = {});

// Single-mode squeezed vacuum with squeeze magnitude r >= 0 and phase theta.
// Odd amplitudes are exactly zero; the kept dimension is chosen so the
// discarded tail mass is <= policy.tail_tol.
FockVector make_smsv(double r, double theta, const TruncationPolicy& policy = {});

// Coherent state C_n = e^{-|alpha|^2/2} alpha^n / sqrt(n!), truncated so the
// Poisson tail mass is <= policy.tail_tol.
FockVector make_coherent(Complex alpha, const TruncationPolicy& policy = {});

// Escape hatch for tests and raw configs: take amplitudes as given.
FockVector from_amps(std::vector<Complex> amps);

// <u|v>, conjugate-linear in the first argument; shorter vector zero-padded.
Complex inner(const FockVector& u, const FockVector& v);

// Copy extended (or identical) to at least `dim` modes.
FockVector padded(const FockVector& v, int dim);

}  // namespace jcbell
