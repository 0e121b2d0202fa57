#include "jcbell/bell_optimizer.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <memory>
#include <vector>

#include "jcbell/errors.hpp"

namespace jcbell {

namespace {

constexpr Complex kZero{0.0, 0.0};

bool is_tridiagonal(const Eigen::MatrixXcd& m) {
  const int n = static_cast<int>(m.rows());
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      if (std::abs(i - j) >= 2 && m(i, j) != kZero) return false;
  return true;
}

// Sum of |eigenvalues| of a real symmetric tridiagonal matrix, splitting into
// irreducible blocks at exactly-zero couplings. 1x1 and 2x2 blocks are closed
// form; larger blocks go through the QL solver.
double tridiag_abs_eig_sum(const Eigen::VectorXd& diag,
                           const Eigen::VectorXd& sub,
                           Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>& ql) {
  const int n = static_cast<int>(diag.size());
  double total = 0.0;
  int i = 0;
  while (i < n) {
    int j = i;
    while (j + 1 < n && sub[j] != 0.0) ++j;
    const int len = j - i + 1;
    if (len == 1) {
      total += std::abs(diag[i]);
    } else if (len == 2) {
      const double mid = 0.5 * (diag[i] + diag[j]);
      const double h = std::hypot(0.5 * (diag[i] - diag[j]), sub[i]);
      total += std::abs(mid + h) + std::abs(mid - h);
    } else {
      ql.computeFromTridiagonal(diag.segment(i, len), sub.segment(i, len - 1),
                                Eigen::EigenvaluesOnly);
      if (ql.info() != Eigen::Success)
        throw NumericalError("tridiagonal eigensolver failed to converge");
      total += ql.eigenvalues().cwiseAbs().sum();
    }
    i = j + 1;
  }
  return total;
}

// ||r1 b1 + r2 b2 + r3 b3||_1 evaluator; one instance per scan.
class TraceNormEngine {
 public:
  virtual ~TraceNormEngine() = default;
  virtual double trace_norm(const double r[3]) const = 0;
};

class TridiagEngine final : public TraceNormEngine {
 public:
  TridiagEngine(const Eigen::MatrixXcd& b1, const Eigen::MatrixXcd& b2,
                const Eigen::MatrixXcd& b3) {
    n_ = static_cast<int>(b1.rows());
    for (int a = 0; a < 3; ++a) {
      diag_[a].resize(n_);
      off_[a].resize(std::max(n_ - 1, 0));
    }
    const Eigen::MatrixXcd* bs[3] = {&b1, &b2, &b3};
    for (int a = 0; a < 3; ++a) {
      for (int i = 0; i < n_; ++i) diag_[a][i] = std::real((*bs[a])(i, i));
      for (int i = 0; i + 1 < n_; ++i) off_[a][i] = (*bs[a])(i + 1, i);
    }
    dwork_.resize(n_);
    ework_.resize(std::max(n_ - 1, 0));
  }

  double trace_norm(const double r[3]) const override {
    for (int i = 0; i < n_; ++i)
      dwork_[i] = r[0] * diag_[0][i] + r[1] * diag_[1][i] + r[2] * diag_[2][i];
    for (int i = 0; i + 1 < n_; ++i)
      ework_[i] = std::abs(r[0] * off_[0][i] + r[1] * off_[1][i] +
                           r[2] * off_[2][i]);
    return tridiag_abs_eig_sum(dwork_, ework_, ql_);
  }

 private:
  int n_ = 0;
  Eigen::VectorXd diag_[3];
  Eigen::VectorXcd off_[3];
  mutable Eigen::VectorXd dwork_, ework_;
  mutable Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ql_;
};

class DenseEngine final : public TraceNormEngine {
 public:
  DenseEngine(Eigen::MatrixXcd b1, Eigen::MatrixXcd b2, Eigen::MatrixXcd b3)
      : b1_(std::move(b1)), b2_(std::move(b2)), b3_(std::move(b3)) {
    work_.resize(b1_.rows(), b1_.cols());
  }

  double trace_norm(const double r[3]) const override {
    work_ = r[0] * b1_ + r[1] * b2_ + r[2] * b3_;
    es_.compute(work_, Eigen::EigenvaluesOnly);
    if (es_.info() != Eigen::Success)
      throw NumericalError("Hermitian eigensolver failed to converge");
    return es_.eigenvalues().cwiseAbs().sum();
  }

 private:
  Eigen::MatrixXcd b1_, b2_, b3_;
  mutable Eigen::MatrixXcd work_;
  mutable Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es_;
};

// The beta blocks live on the field-side support of rho, so they can be
// conjugated by an isometry onto that subspace without changing any
// eigenvalue sums. Shrinks the per-rotation eigensolves for low-rank rho
// (rank-1 pure projectors become 2x2 problems).
bool compress_betas(const HybridDensityMatrix& rho, Eigen::MatrixXcd* b1,
                    Eigen::MatrixXcd* b2, Eigen::MatrixXcd* b3) {
  const int d = rho.dim();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho.full());
  if (es.info() != Eigen::Success) return false;
  std::vector<int> kept;
  for (int j = 0; j < 2 * d; ++j)
    if (es.eigenvalues()[j] > 1e-14) kept.push_back(j);
  if (kept.empty()) return false;

  Eigen::MatrixXcd w(d, 2 * kept.size());
  for (size_t m = 0; m < kept.size(); ++m) {
    const double s = std::sqrt(es.eigenvalues()[kept[m]]);
    w.col(2 * m) = s * es.eigenvectors().col(kept[m]).head(d);
    w.col(2 * m + 1) = s * es.eigenvectors().col(kept[m]).tail(d);
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(w, Eigen::ComputeThinU);
  const double cutoff = 1e-12 * svd.singularValues()[0];
  int rank = 0;
  while (rank < svd.singularValues().size() &&
         svd.singularValues()[rank] > cutoff)
    ++rank;
  if (rank == 0 || rank >= d) return false;

  const Eigen::MatrixXcd v = svd.matrixU().leftCols(rank);
  *b1 = v.adjoint() * (*b1) * v;
  *b2 = v.adjoint() * (*b2) * v;
  *b3 = v.adjoint() * (*b3) * v;
  return true;
}

std::unique_ptr<TraceNormEngine> make_engine(const HybridDensityMatrix& rho,
                                             const BetaDecomposition& betas) {
  if (is_tridiagonal(betas.beta1) && is_tridiagonal(betas.beta2) &&
      is_tridiagonal(betas.beta3))
    return std::make_unique<TridiagEngine>(betas.beta1, betas.beta2,
                                           betas.beta3);
  Eigen::MatrixXcd b1 = betas.beta1, b2 = betas.beta2, b3 = betas.beta3;
  compress_betas(rho, &b1, &b2, &b3);
  return std::make_unique<DenseEngine>(std::move(b1), std::move(b2),
                                       std::move(b3));
}

void euler_rows(const std::array<double, 3>& ang, double row1[3],
                double row2[3]) {
  const double ca = std::cos(ang[0]), sa = std::sin(ang[0]);
  const double cb = std::cos(ang[1]), sb = std::sin(ang[1]);
  const double cg = std::cos(ang[2]), sg = std::sin(ang[2]);
  row1[0] = ca * cb * cg - sa * sg;
  row1[1] = -ca * cb * sg - sa * cg;
  row1[2] = ca * sb;
  row2[0] = sa * cb * cg + ca * sg;
  row2[1] = -sa * cb * sg + ca * cg;
  row2[2] = sa * sb;
}

struct PairNorms {
  double tn1, tn2;
};

PairNorms rotated_norms(const TraceNormEngine& engine,
                        const std::array<double, 3>& ang) {
  double r1[3], r2[3];
  euler_rows(ang, r1, r2);
  return {engine.trace_norm(r1), engine.trace_norm(r2)};
}

double objective(const TraceNormEngine& engine,
                 const std::array<double, 3>& ang) {
  const PairNorms p = rotated_norms(engine, ang);
  return p.tn1 * p.tn1 + p.tn2 * p.tn2;
}

struct Seed {
  double f;
  std::array<double, 3> ang;
};

double ang_dist(const std::array<double, 3>& a, const std::array<double, 3>& b) {
  double m = 0.0;
  for (int i = 0; i < 3; ++i) {
    double d = std::fmod(std::abs(a[i] - b[i]), 2.0 * M_PI);
    d = std::min(d, 2.0 * M_PI - d);
    m = std::max(m, d);
  }
  return m;
}

// Keeps the best few coarse-grid points as refinement seeds, collapsing
// candidates that fall in the same basin.
void offer_seed(std::vector<Seed>& seeds, size_t cap, double sep, double f,
                const std::array<double, 3>& ang) {
  for (Seed& s : seeds) {
    if (ang_dist(s.ang, ang) < sep) {
      if (f > s.f) s = Seed{f, ang};
      std::sort(seeds.begin(), seeds.end(),
                [](const Seed& x, const Seed& y) { return x.f > y.f; });
      return;
    }
  }
  if (seeds.size() < cap) {
    seeds.push_back(Seed{f, ang});
  } else if (f > seeds.back().f) {
    seeds.back() = Seed{f, ang};
  } else {
    return;
  }
  std::sort(seeds.begin(), seeds.end(),
            [](const Seed& x, const Seed& y) { return x.f > y.f; });
}

// Nelder-Mead maximization of the scan objective around a seed.
Seed refine(const TraceNormEngine& engine, const Seed& seed, double step,
            int max_iters, double tol) {
  constexpr int kDim = 3;
  std::array<std::array<double, 3>, kDim + 1> x;
  std::array<double, kDim + 1> v;
  x[0] = seed.ang;
  v[0] = seed.f;
  for (int i = 0; i < kDim; ++i) {
    x[i + 1] = seed.ang;
    x[i + 1][i] += step;
    v[i + 1] = objective(engine, x[i + 1]);
  }
  auto order = [&]() {
    for (int i = 0; i <= kDim; ++i)
      for (int j = i + 1; j <= kDim; ++j)
        if (v[j] > v[i]) {
          std::swap(v[i], v[j]);
          std::swap(x[i], x[j]);
        }
  };
  order();
  for (int iter = 0; iter < max_iters && v[0] - v[kDim] > tol; ++iter) {
    std::array<double, 3> centroid{0, 0, 0};
    for (int i = 0; i < kDim; ++i)
      for (int c = 0; c < 3; ++c) centroid[c] += x[i][c] / kDim;
    auto blend = [&](double coeff) {
      std::array<double, 3> p;
      for (int c = 0; c < 3; ++c)
        p[c] = centroid[c] + coeff * (x[kDim][c] - centroid[c]);
      return p;
    };
    const auto xr = blend(-1.0);
    const double vr = objective(engine, xr);
    if (vr > v[0]) {
      const auto xe = blend(-2.0);
      const double ve = objective(engine, xe);
      if (ve > vr) {
        x[kDim] = xe;
        v[kDim] = ve;
      } else {
        x[kDim] = xr;
        v[kDim] = vr;
      }
    } else if (vr > v[kDim - 1]) {
      x[kDim] = xr;
      v[kDim] = vr;
    } else {
      const auto xc = blend(0.5);
      const double vc = objective(engine, xc);
      if (vc > v[kDim]) {
        x[kDim] = xc;
        v[kDim] = vc;
      } else {
        for (int i = 1; i <= kDim; ++i) {
          for (int c = 0; c < 3; ++c) x[i][c] = 0.5 * (x[i][c] + x[0][c]);
          v[i] = objective(engine, x[i]);
        }
      }
    }
    order();
  }
  return Seed{v[0], x[0]};
}

}  // namespace

HybridDensityMatrix BetaDecomposition::reconstruct() const {
  HybridDensityMatrix rho;
  rho.ee = 0.5 * (beta0 + beta3);
  rho.gg = 0.5 * (beta0 - beta3);
  rho.eg = 0.5 * (beta1 - Complex(0.0, 1.0) * beta2);
  return rho;
}

BetaDecomposition decompose(const HybridDensityMatrix& rho) {
  const double herm =
      std::max((rho.ee - rho.ee.adjoint()).cwiseAbs().maxCoeff(),
               (rho.gg - rho.gg.adjoint()).cwiseAbs().maxCoeff());
  if (herm > 1e-10)
    throw NumericalError("decompose: input not Hermitian (deviation " +
                         std::to_string(herm) + ")");
  BetaDecomposition b;
  b.beta0 = rho.ee + rho.gg;
  b.beta1 = rho.eg + rho.eg.adjoint();
  b.beta2 = Complex(0.0, 1.0) * (rho.eg - rho.eg.adjoint());
  b.beta3 = rho.ee - rho.gg;
  // Hermitian completion kills rounding asymmetry in the diagonal blocks.
  b.beta0 = 0.5 * (b.beta0 + b.beta0.adjoint()).eval();
  b.beta3 = 0.5 * (b.beta3 + b.beta3.adjoint()).eval();
  return b;
}

BellResult bell_max_scan(const HybridDensityMatrix& rho,
                         const RotationScanConfig& cfg) {
  if (cfg.coarse_steps < 8)
    throw ConfigError("scan.coarse_steps: must be >= 8");
  if (cfg.refine_tol <= 0) throw ConfigError("scan.refine_tol: must be > 0");
  if (cfg.refine_iters < 0) throw ConfigError("scan.refine_iters: must be >= 0");

  const BetaDecomposition betas = decompose(rho);
  const auto engine = make_engine(rho, betas);

  // f(R) is invariant under alpha -> alpha + pi (sign flip of both rotated
  // rows), so alpha and beta scan [0, pi) while gamma covers [0, 2 pi).
  const int n = cfg.coarse_steps;
  const double step_a = M_PI / n, step_b = M_PI / n, step_g = 2.0 * M_PI / n;
  constexpr size_t kSeedCap = 8;
  std::vector<Seed> seeds;
  seeds.reserve(kSeedCap + 1);
  const double sep = 1.5 * std::max(step_a, step_g);
  for (int ia = 0; ia < n; ++ia)
    for (int ib = 0; ib < n; ++ib)
      for (int ig = 0; ig < n; ++ig) {
        const std::array<double, 3> ang{ia * step_a, ib * step_b, ig * step_g};
        offer_seed(seeds, kSeedCap, sep, objective(*engine, ang), ang);
      }
  // Quarter-turn rotations (identity and axis permutations) are exact optima
  // for several analytic cases; seed them regardless of grid divisibility.
  const double kQuarter = 0.5 * M_PI;
  for (int ia = 0; ia < 2; ++ia)
    for (int ib = 0; ib < 3; ++ib)
      for (int ig = 0; ig < 4; ++ig) {
        const std::array<double, 3> ang{ia * kQuarter, ib * kQuarter,
                                        ig * kQuarter};
        offer_seed(seeds, kSeedCap, sep, objective(*engine, ang), ang);
      }

  Seed best{-1.0, {0, 0, 0}};
  const double nm_step = 0.5 * std::max(step_a, step_g);
  for (const Seed& s : seeds) {
    const Seed r = refine(*engine, s, nm_step, cfg.refine_iters, cfg.refine_tol);
    if (r.f > best.f) best = r;
  }

  BellResult result;
  const PairNorms norms = rotated_norms(*engine, best.ang);
  result.sum1 = norms.tn1;
  result.sum2 = norms.tn2;
  result.value = 2.0 * std::sqrt(norms.tn1 * norms.tn1 + norms.tn2 * norms.tn2);
  for (int c = 0; c < 3; ++c) {
    double a = std::fmod(best.ang[c], 2.0 * M_PI);
    if (a < 0) a += 2.0 * M_PI;
    result.euler[c] = a;
  }
  return result;
}

double identity_lower_bound(const HybridDensityMatrix& rho) {
  const BetaDecomposition betas = decompose(rho);
  const auto engine = make_engine(rho, betas);
  const double r1[3] = {1.0, 0.0, 0.0};
  const double r2[3] = {0.0, 1.0, 0.0};
  const double tn1 = engine->trace_norm(r1);
  const double tn2 = engine->trace_norm(r2);
  return 2.0 * std::sqrt(tn1 * tn1 + tn2 * tn2);
}

double bell_max_pure(const HybridPureState& state) {
  const double n2 = state.norm2();
  if (std::abs(n2 - 1.0) > 1e-8)
    throw NumericalError("bell_max_pure: state norm^2 = " + std::to_string(n2) +
                         " violates normalization");
  const double gg = state.phi_g.norm2();
  const double ee = state.phi_e.norm2();
  const double cross = std::norm(inner(state.phi_g, state.phi_e));
  return 2.0 * std::sqrt(1.0 + 4.0 * (gg * ee - cross));
}

double bell_max_fock_noisy(int k, double lambda_bar, double sigma, double t) {
  if (k < 0) throw ConfigError("bell_max_fock_noisy: k must be >= 0");
  const double kp1 = k + 1.0;
  const double att = std::exp(-4.0 * kp1 * t * t * sigma * sigma);
  const double s = std::sin(2.0 * std::sqrt(kp1) * t * lambda_bar);
  return 2.0 * std::sqrt(1.0 + att * s * s);
}

}  // namespace jcbell
