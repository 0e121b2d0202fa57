#include "jcbell/entanglement.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <string>

#include "jcbell/errors.hpp"

namespace jcbell {

namespace {

constexpr Complex kZero{0.0, 0.0};

double entropy_term(double p, double log_base) {
  return p > 0.0 ? -p * std::log(p) / log_base : 0.0;
}

// Eigenvalues of the 2x2 reduced atom matrix, clipped to [0, 1].
std::pair<double, double> reduced_eigenvalues(const HybridPureState& state) {
  const Eigen::Matrix2cd rho_a = reduced_atom_matrix(state);
  const double mid = 0.5 * std::real(rho_a(0, 0) + rho_a(1, 1));
  const double h = std::hypot(0.5 * std::real(rho_a(0, 0) - rho_a(1, 1)),
                              std::abs(rho_a(0, 1)));
  auto clip = [](double p) { return std::clamp(p, 0.0, 1.0); };
  return {clip(mid - h), clip(mid + h)};  // eigenvalues below -1e-14 are noise
}

}  // namespace

Eigen::Matrix2cd reduced_atom_matrix(const HybridPureState& state) {
  Eigen::Matrix2cd rho_a;
  rho_a(0, 0) = inner(state.phi_g, state.phi_g);
  rho_a(1, 1) = inner(state.phi_e, state.phi_e);
  rho_a(0, 1) = inner(state.phi_e, state.phi_g);
  rho_a(1, 0) = std::conj(rho_a(0, 1));
  return rho_a;
}

double von_neumann_entropy(const HybridPureState& state, EntropyBase base) {
  require_normalized(state);
  const auto [lo, hi] = reduced_eigenvalues(state);
  const double log_base = base == EntropyBase::bits ? std::log(2.0) : 1.0;
  return entropy_term(lo, log_base) + entropy_term(hi, log_base);
}

SchmidtData schmidt_angle(const HybridPureState& state) {
  require_normalized(state);
  const auto [lo, hi] = reduced_eigenvalues(state);
  (void)hi;
  SchmidtData data;
  data.theta = std::asin(std::sqrt(std::min(lo, 0.5)));
  data.cos_theta = std::cos(data.theta);
  data.sin_theta = std::sin(data.theta);
  return data;
}

std::vector<std::pair<double, double>> entropy_bell_curve(
    const std::vector<double>& theta_grid) {
  std::vector<std::pair<double, double>> curve;
  curve.reserve(theta_grid.size());
  const double log2 = std::log(2.0);
  for (double theta : theta_grid) {
    if (theta < -1e-12 || theta > 0.25 * M_PI + 1e-12)
      throw ConfigError("entropy_bell_curve: theta = " + std::to_string(theta) +
                        " outside [0, pi/4]");
    const double c2 = std::cos(theta) * std::cos(theta);
    const double s2 = 1.0 - c2;
    const double entropy = entropy_term(c2, log2) + entropy_term(s2, log2);
    const double s2t = std::sin(2.0 * theta);
    curve.emplace_back(entropy, 2.0 * std::sqrt(1.0 + s2t * s2t));
  }
  return curve;
}

Eigen::MatrixXcd partial_transpose(const HybridDensityMatrix& rho) {
  const int d = rho.dim();
  Eigen::MatrixXcd pt(2 * d, 2 * d);
  pt.topLeftCorner(d, d) = rho.ee.transpose();
  pt.topRightCorner(d, d) = rho.eg.transpose();
  pt.bottomLeftCorner(d, d) = rho.eg.conjugate();
  pt.bottomRightCorner(d, d) = rho.gg.transpose();
  return pt;
}

Eigen::MatrixXcd partial_transpose(const Eigen::MatrixXcd& full, int dim) {
  Eigen::MatrixXcd pt(2 * dim, 2 * dim);
  pt.topLeftCorner(dim, dim) = full.topLeftCorner(dim, dim).transpose();
  pt.topRightCorner(dim, dim) = full.topRightCorner(dim, dim).transpose();
  pt.bottomLeftCorner(dim, dim) = full.bottomLeftCorner(dim, dim).transpose();
  pt.bottomRightCorner(dim, dim) =
      full.bottomRightCorner(dim, dim).transpose();
  return pt;
}

namespace {

bool is_diagonal(const Eigen::MatrixXcd& m) {
  const int n = static_cast<int>(m.rows());
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      if (i != j && m(i, j) != kZero) return false;
  return true;
}

bool is_single_superdiagonal(const Eigen::MatrixXcd& m) {
  const int n = static_cast<int>(m.rows());
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      if (j != i + 1 && m(i, j) != kZero) return false;
  return true;
}

// For asymptotic-form matrices the partial transpose is an exact direct sum
// of 2x2 blocks on {|g,n>, |e,n+1>} plus the singletons (e,0) and (g,d-1);
// the spectrum follows in closed form, free of dense-solver noise.
double ppt_min_eigenvalue_blocks(const HybridDensityMatrix& rho) {
  const int d = rho.dim();
  double min_eig = std::real(rho.ee(0, 0));                    // (e,0)
  min_eig = std::min(min_eig, std::real(rho.gg(d - 1, d - 1)));  // (g,d-1)
  for (int n = 0; n + 1 < d; ++n) {
    const double a11 = std::real(rho.gg(n, n));
    const double a22 = std::real(rho.ee(n + 1, n + 1));
    const double a12 = std::abs(rho.eg(n, n + 1));
    const double mid = 0.5 * (a11 + a22);
    const double h = std::hypot(0.5 * (a11 - a22), a12);
    min_eig = std::min(min_eig, mid - h);
  }
  return min_eig;
}

}  // namespace

double ppt_min_eigenvalue(const HybridDensityMatrix& rho) {
  if (is_diagonal(rho.ee) && is_diagonal(rho.gg) &&
      is_single_superdiagonal(rho.eg))
    return ppt_min_eigenvalue_blocks(rho);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(partial_transpose(rho),
                                                     Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw NumericalError("ppt_min_eigenvalue: eigensolver failed");
  return es.eigenvalues().minCoeff();
}

std::optional<WitnessReport> coherent_witness(double c_g, double c_e,
                                              double alpha) {
  const double cg2 = c_g * c_g, ce2 = c_e * c_e;
  if (std::abs(cg2 + ce2 - 1.0) > 1e-9)
    throw ConfigError("coherent_witness: c_g^2 + c_e^2 must equal 1");
  if (c_e == 0.0)
    throw ConfigError("coherent_witness: c_e must be nonzero");
  if (c_g == 0.0 || alpha == 0.0) return std::nullopt;  // rho_eg vanishes

  const double a = std::abs(alpha);
  const double u = a * a;

  // P(n) < 0 marks the modes whose partial-transpose block has det < 0; its
  // upper root bounds the search window.
  auto poly_p = [&](double n) {
    return ce2 * ce2 * n * (2.0 + n) - 2.0 * ce2 * cg2 * u * (3.0 + n) +
           cg2 * cg2 * u * u;
  };
  const double pa = ce2 * ce2;
  const double pb = 2.0 * ce2 * ce2 - 2.0 * ce2 * cg2 * u;
  const double pc = cg2 * cg2 * u * u - 6.0 * ce2 * cg2 * u;
  const double disc = pb * pb - 4.0 * pa * pc;
  double root_hi = disc > 0 ? (-pb + std::sqrt(disc)) / (2.0 * pa) : 0.0;
  root_hi = std::min(std::max(root_hi, 0.0), double(1 << 20));
  const int n_hi = std::max(4, static_cast<int>(std::ceil(root_hi)) + 2);

  // Coherent amplitudes by recurrence; C_{-1} = 0.
  auto c_next = [&](double c, int n) { return c * a / std::sqrt(double(n)); };

  WitnessReport best;
  bool found = false;
  double c_nm1 = 0.0;                  // C_{n-1}
  double c_n = std::exp(-0.5 * u);     // C_0
  double c_np1 = c_next(c_n, 1);       // C_1
  double c_np2 = c_next(c_np1, 2);     // C_2
  for (int n = 0; n <= n_hi; ++n) {
    WitnessReport w;
    w.n_star = n;
    w.a11 = 0.5 * (cg2 * c_n * c_n + ce2 * c_nm1 * c_nm1);
    if (n == 0) w.a11 += 0.5 * cg2 * c_n * c_n;
    w.a12 = c_g * c_e * c_n * c_np1;
    w.a22 = 0.5 * (ce2 * c_np1 * c_np1 + cg2 * c_np2 * c_np2);
    const double mid = 0.5 * (w.a11 + w.a22);
    const double h = std::hypot(0.5 * (w.a11 - w.a22), w.a12);
    w.mu_minus = mid - h;
    w.p_of_n = poly_p(n);
    if (!found || w.mu_minus < best.mu_minus) {
      best = w;
      found = true;
    }
    c_nm1 = c_n;
    c_n = c_np1;
    c_np1 = c_np2;
    c_np2 = c_next(c_np2, n + 3);
  }
  if (!found || best.mu_minus >= 0.0) return std::nullopt;  // underflow regime
  return best;
}

}  // namespace jcbell
