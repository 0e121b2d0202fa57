#include "jcbell/fock_space.hpp"

#include <cmath>
#include <string>

#include "jcbell/errors.hpp"

namespace jcbell {

FockVector make_fock(int k, const TruncationPolicy& policy) {
  if (k < 0) throw ConfigError("make_fock: k must be non-negative");
  if (k >= policy.max_dim)
    throw TruncationError("make_fock: k=" + std::to_string(k) +
                          " exceeds max_dim=" + std::to_string(policy.max_dim));
  FockVector v;
  v.amps = Eigen::VectorXcd::Zero(k + 2);  // headroom for one a^dagger
  v.amps[k] = 1.0;
  return v;
}

FockVector make_smsv(double r, double theta, const TruncationPolicy& policy) {
  if (r < 0) throw ConfigError("make_smsv: r must be >= 0");
  // C_0 = 1/sqrt(cosh r); even amplitudes follow the two-step ratio
  //   C_{2m+2}/C_{2m} = -e^{i theta} tanh(r) sqrt((2m+1)(2m+2)) / (2(m+1)),
  // odd amplitudes are exactly zero.
  const Complex step_phase = -std::exp(Complex(0.0, theta)) * std::tanh(r);
  std::vector<Complex> amps;
  amps.reserve(policy.max_dim);
  Complex c = 1.0 / std::sqrt(std::cosh(r));
  double kept = std::norm(c);
  amps.push_back(c);
  while (1.0 - kept > policy.tail_tol) {
    const int m = static_cast<int>(amps.size() + 1) / 2;  // next even index 2m
    if (2 * m + 1 > policy.max_dim)
      throw TruncationError(
          "make_smsv: tail tolerance unreachable within max_dim=" +
          std::to_string(policy.max_dim) + " (r=" + std::to_string(r) + ")");
    c *= step_phase * std::sqrt(double(2 * m - 1) * double(2 * m)) / (2.0 * m);
    amps.push_back(Complex(0.0, 0.0));
    amps.push_back(c);
    kept += std::norm(c);
  }
  return from_amps(std::move(amps));
}

FockVector make_coherent(Complex alpha, const TruncationPolicy& policy) {
  // C_{n+1} = C_n alpha / sqrt(n+1); avoids factorial overflow.
  std::vector<Complex> amps;
  amps.reserve(policy.max_dim);
  Complex c = std::exp(-0.5 * std::norm(alpha));
  double kept = std::norm(c);
  amps.push_back(c);
  while (1.0 - kept > policy.tail_tol) {
    const int n = static_cast<int>(amps.size());
    if (n + 1 > policy.max_dim)
      throw TruncationError(
          "make_coherent: tail tolerance unreachable within max_dim=" +
          std::to_string(policy.max_dim) +
          " (|alpha|=" + std::to_string(std::abs(alpha)) + ")");
    c *= alpha / std::sqrt(double(n));
    amps.push_back(c);
    kept += std::norm(c);
  }
  return from_amps(std::move(amps));
}

FockVector from_amps(std::vector<Complex> amps) {
  if (amps.empty()) throw ConfigError("from_amps: empty amplitude list");
  FockVector v;
  v.amps = Eigen::Map<const Eigen::VectorXcd>(amps.data(), amps.size());
  return v;
}

Complex inner(const FockVector& u, const FockVector& v) {
  const int n = std::min(u.dim(), v.dim());
  if (n == 0) return Complex(0.0, 0.0);
  return u.amps.head(n).dot(v.amps.head(n));  // Eigen dot conjugates the left
}

FockVector padded(const FockVector& v, int dim) {
  if (v.dim() >= dim) return v;
  FockVector out;
  out.amps = Eigen::VectorXcd::Zero(dim);
  out.amps.head(v.dim()) = v.amps;
  return out;
}

}  // namespace jcbell
