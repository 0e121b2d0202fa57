#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <random>

#include "jcbell/bell_optimizer.hpp"
#include "jcbell/errors.hpp"
#include "jcbell/jc_dynamics.hpp"

using namespace jcbell;

namespace {

const double kTsirelson = 2.0 * std::sqrt(2.0);

HybridPureState random_state(std::mt19937& gen, int dim) {
  std::normal_distribution<double> dist;
  HybridPureState s;
  s.phi_g.amps.resize(dim);
  s.phi_e.amps.resize(dim);
  for (int i = 0; i < dim; ++i) {
    s.phi_g.amps[i] = Complex(dist(gen), dist(gen));
    s.phi_e.amps[i] = Complex(dist(gen), dist(gen));
  }
  const double scale = 1.0 / std::sqrt(s.norm2());
  s.phi_g.amps *= scale;
  s.phi_e.amps *= scale;
  return s;
}

HybridPureState bell_like_state() {
  // (|g>|0> + |e>|1>)/sqrt(2)
  HybridPureState s(make_fock(0), make_fock(1));
  s.phi_g.amps *= 1.0 / std::sqrt(2.0);
  s.phi_e.amps *= 1.0 / std::sqrt(2.0);
  return s;
}

HybridPureState excited_fock(int k) {
  HybridPureState s(make_fock(k), make_fock(k));
  s.phi_g.amps.setZero();
  return s;
}

Eigen::MatrixXcd random_unitary(std::mt19937& gen, int n) {
  std::normal_distribution<double> dist;
  Eigen::MatrixXcd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = Complex(dist(gen), dist(gen));
  const Eigen::HouseholderQR<Eigen::MatrixXcd> qr(a);
  Eigen::MatrixXcd q = qr.householderQ();
  const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) q.col(j) *= r(j, j) / std::abs(r(j, j));
  return q;
}

}  // namespace

TEST_CASE("decompose: projector examples and reconstruction") {
  // rho = |e><e| (x) |0><0|
  const HybridDensityMatrix rho_sep = HybridDensityMatrix::pure(excited_fock(0));
  const BetaDecomposition b_sep = decompose(rho_sep);
  CHECK((b_sep.beta0 - b_sep.beta3).norm() == 0.0);
  CHECK(std::real(b_sep.beta0(0, 0)) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(b_sep.beta1.norm() == 0.0);
  CHECK(b_sep.beta2.norm() == 0.0);

  // rho = (1/2) 1_2 (x) |0><0|
  HybridDensityMatrix rho_mixed = HybridDensityMatrix::zero(2);
  rho_mixed.ee(0, 0) = 0.5;
  rho_mixed.gg(0, 0) = 0.5;
  const BetaDecomposition b_mixed = decompose(rho_mixed);
  CHECK(std::real(b_mixed.beta0(0, 0)) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(b_mixed.beta1.norm() == 0.0);
  CHECK(b_mixed.beta2.norm() == 0.0);
  CHECK(b_mixed.beta3.norm() == 0.0);

  // Bell-like state: beta1 = (|0><1| + |1><0|)/2
  const BetaDecomposition b_bell =
      decompose(HybridDensityMatrix::pure(bell_like_state()));
  CHECK(std::abs(b_bell.beta1(0, 1) - Complex(0.5, 0.0)) <= 1e-15);
  CHECK(std::abs(b_bell.beta1(1, 0) - Complex(0.5, 0.0)) <= 1e-15);
  CHECK(std::abs(b_bell.beta1(0, 0)) == 0.0);

  std::mt19937 gen(42);
  for (int trial = 0; trial < 10; ++trial) {
    NoiseModel noise;
    noise.sigma = 0.1;
    const HybridDensityMatrix rho =
        noisy_density_matrix(random_state(gen, 4), noise, 1.0 + trial);
    const BetaDecomposition b = decompose(rho);
    const HybridDensityMatrix back = b.reconstruct();
    CHECK((rho.full() - back.full()).norm() <= 1e-12);
    CHECK(std::abs(b.beta0.trace().real() - 1.0) <= 1e-10);
    for (const auto* m : {&b.beta0, &b.beta1, &b.beta2, &b.beta3})
      CHECK((*m - m->adjoint()).norm() <= 1e-12);
  }
}

TEST_CASE("decompose rejects non-Hermitian input") {
  HybridDensityMatrix rho = HybridDensityMatrix::zero(2);
  rho.ee(0, 1) = Complex(0.3, 0.0);  // missing conjugate partner
  rho.ee(0, 0) = 0.5;
  rho.gg(0, 0) = 0.5;
  CHECK_THROWS_AS(decompose(rho), NumericalError);
}

TEST_CASE("bell_max_scan: separable state gives 2, Bell state saturates") {
  const BellResult sep =
      bell_max_scan(HybridDensityMatrix::pure(excited_fock(0)));
  CHECK(std::abs(sep.value - 2.0) <= 1e-10);

  const BellResult bell =
      bell_max_scan(HybridDensityMatrix::pure(bell_like_state()));
  CHECK(std::abs(bell.value - kTsirelson) <= 1e-9);
  CHECK(bell.value <= kTsirelson + 1e-9);
  CHECK(bell.value ==
        doctest::Approx(2.0 * std::hypot(bell.sum1, bell.sum2)).epsilon(1e-12));
}

TEST_CASE("bell_max_scan agrees with the pure-state closed form") {
  std::mt19937 gen(2024);
  std::uniform_int_distribution<int> dims(2, 12);
  for (int trial = 0; trial < 20; ++trial) {
    const HybridPureState s = random_state(gen, dims(gen));
    const double exact = bell_max_pure(s);
    const BellResult scanned = bell_max_scan(HybridDensityMatrix::pure(s));
    CHECK(std::abs(scanned.value - exact) <= 1e-6);
    CHECK(scanned.value >= 2.0 - 1e-9);
    CHECK(scanned.value <= kTsirelson + 1e-9);
  }
}

TEST_CASE("bell_max_scan matches the qubit-qubit singular-value criterion") {
  // Independent mixed-state oracle for d=2: with T_ij = Tr(rho sigma_i x
  // sigma_j), the maximal CHSH value over non-degenerate observables is
  // 2 sqrt(m1 + m2), the top two eigenvalues of T^T T. Degenerate-signature
  // observable families never exceed 2, so the scan obeys
  //   horodecki <= scan <= max(2, horodecki),
  // with equality above 2.
  std::mt19937 gen(90210);
  std::normal_distribution<double> dist;
  Eigen::Matrix2cd sigma[3];
  sigma[0] << 0, 1, 1, 0;
  sigma[1] << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
  sigma[2] << 1, 0, 0, -1;

  for (int rank : {1, 2, 3, 4, 2, 3, 4, 1}) {
    Eigen::MatrixXcd m(4, rank);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < rank; ++j) m(i, j) = Complex(dist(gen), dist(gen));
    Eigen::MatrixXcd full = m * m.adjoint();
    full /= full.trace().real();
    HybridDensityMatrix rho;
    rho.ee = full.topLeftCorner(2, 2);
    rho.eg = full.topRightCorner(2, 2);
    rho.gg = full.bottomRightCorner(2, 2);

    const BetaDecomposition betas = decompose(rho);
    const Eigen::MatrixXcd* bs[3] = {&betas.beta1, &betas.beta2, &betas.beta3};
    Eigen::Matrix3d t;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) t(i, j) = ((*bs[i]) * sigma[j]).trace().real();
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(t.transpose() * t);
    const double horodecki =
        2.0 * std::sqrt(es.eigenvalues()[2] + es.eigenvalues()[1]);

    const double scanned = bell_max_scan(rho).value;
    CHECK(scanned >= horodecki - 1e-6);
    CHECK(scanned <= std::max(2.0, horodecki + 1e-6));
    if (horodecki > 2.0) CHECK(std::abs(scanned - horodecki) <= 1e-6);
  }
}

TEST_CASE("bell_max_scan is invariant under local unitaries") {
  std::mt19937 gen(777);
  NoiseModel noise;
  noise.sigma = 0.15;
  const HybridDensityMatrix rho =
      noisy_density_matrix(random_state(gen, 4), noise, 2.0);
  const double base = bell_max_scan(rho).value;

  const int d = rho.dim();
  for (int trial = 0; trial < 4; ++trial) {
    const Eigen::MatrixXcd u2 = random_unitary(gen, 2);
    const Eigen::MatrixXcd ud = random_unitary(gen, d);
    Eigen::MatrixXcd u(2 * d, 2 * d);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) u.block(i * d, j * d, d, d) = u2(i, j) * ud;
    const Eigen::MatrixXcd conj = u * rho.full() * u.adjoint();
    HybridDensityMatrix rotated;
    rotated.ee = conj.topLeftCorner(d, d);
    rotated.eg = conj.topRightCorner(d, d);
    rotated.gg = conj.bottomRightCorner(d, d);
    CHECK(std::abs(bell_max_scan(rotated).value - base) <= 1e-6);
  }
}

TEST_CASE("identity_lower_bound never exceeds the scanned maximum") {
  std::mt19937 gen(31415);
  NoiseModel noise;
  noise.sigma = 0.1;
  for (int trial = 0; trial < 8; ++trial) {
    const HybridDensityMatrix rho =
        noisy_density_matrix(random_state(gen, 5), noise, 0.5 + trial);
    const double lower = identity_lower_bound(rho);
    const double maxed = bell_max_scan(rho).value;
    CHECK(lower <= maxed + 1e-12);
  }
  // Separable states never exceed 2 at the identity rotation. The bound
  // itself is basis dependent: it vanishes for |e>|0> (beta1 = beta2 = 0)
  // and equals 2 exactly for an x-polarized atom.
  const double sep_lower =
      identity_lower_bound(HybridDensityMatrix::pure(excited_fock(0)));
  CHECK(sep_lower <= 2.0 + 1e-12);

  HybridPureState xatom(make_fock(0), make_fock(0));
  xatom.phi_g.amps *= 1.0 / std::sqrt(2.0);
  xatom.phi_e.amps *= 1.0 / std::sqrt(2.0);
  CHECK(identity_lower_bound(HybridDensityMatrix::pure(xatom)) ==
        doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("bell_max_scan handles one-mode fields") {
  // (0.6|g> + 0.8|e>) (x) |0>: product state, no violation
  HybridPureState s{FockVector{Eigen::VectorXcd::Constant(1, 0.6)},
                    FockVector{Eigen::VectorXcd::Constant(1, 0.8)}};
  const BellResult res = bell_max_scan(HybridDensityMatrix::pure(s));
  CHECK(std::abs(res.value - 2.0) <= 1e-9);
}

TEST_CASE("bell_max_pure: closed-form special cases") {
  // phi_e = 0: product of |g> with the field
  HybridPureState product(make_fock(0), make_fock(0));
  product.phi_e.amps.setZero();
  CHECK(bell_max_pure(product) == doctest::Approx(2.0).epsilon(1e-15));

  CHECK(bell_max_pure(bell_like_state()) ==
        doctest::Approx(kTsirelson).epsilon(1e-15));

  // JC evolution of |e>|0> at t = pi/4 is maximally entangled
  const HybridPureState evolved = evolve_pure(excited_fock(0), 1.0, 0.25 * M_PI);
  CHECK(bell_max_pure(evolved) == doctest::Approx(kTsirelson).epsilon(1e-12));

  HybridPureState bad = bell_like_state();
  bad.phi_g.amps *= 1.1;
  CHECK_THROWS_AS(bell_max_pure(bad), NumericalError);
}

TEST_CASE("bell_max_fock_noisy closed form") {
  CHECK(bell_max_fock_noisy(0, 1.0, 0.0, 0.0) == 2.0);
  CHECK(bell_max_fock_noisy(0, 1.0, 0.0, 0.25 * M_PI) ==
        doctest::Approx(kTsirelson).epsilon(1e-15));
  // frozen from the closed form evaluated at 30 digits
  CHECK(bell_max_fock_noisy(1, 1.0, 0.2, 5.0) ==
        doctest::Approx(2.0003354262184472).epsilon(1e-15));
}

TEST_CASE("full noisy pipeline matches the analytic Fock expression") {
  NoiseModel noise;
  noise.sigma = 0.2;
  const int k = 1;
  for (double t : {0.7, 2.5, 5.0}) {
    const HybridDensityMatrix rho = noisy_density_matrix(excited_fock(k), noise, t);
    const BellResult scanned = bell_max_scan(rho);
    const double analytic = bell_max_fock_noisy(k, noise.lambda_bar, noise.sigma, t);
    CHECK(std::abs(scanned.value - analytic) <= 1e-4);
  }
}

TEST_CASE("scan refinement is stable under a denser coarse grid") {
  std::mt19937 gen(555);
  NoiseModel noise;
  noise.sigma = 0.1;
  const HybridDensityMatrix rho =
      noisy_density_matrix(random_state(gen, 4), noise, 3.0);
  RotationScanConfig coarse, dense;
  dense.coarse_steps = 48;
  CHECK(std::abs(bell_max_scan(rho, coarse).value -
                 bell_max_scan(rho, dense).value) <= 1e-6);
}

TEST_CASE("scan config validation") {
  RotationScanConfig bad;
  bad.coarse_steps = 4;
  CHECK_THROWS_AS(
      bell_max_scan(HybridDensityMatrix::pure(bell_like_state()), bad),
      ConfigError);
}
