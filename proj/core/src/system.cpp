#include "exdesign/system.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "exdesign/rng.hpp"

namespace exdesign {

namespace {

// Moduli within this band of the unit circle are treated as on the circle, so
// marginal modes always face the eigenvalue rank test.
constexpr double kUnitCircleBand = 1e-9;

bool pbh_pass(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
              std::complex<double> lambda, std::optional<double> rel_rank_tol) {
  const Eigen::Index n = A.rows();
  Eigen::MatrixXcd M(n, n + B.cols());
  M.leftCols(n) = A.cast<std::complex<double>>() -
                  lambda * Eigen::MatrixXcd::Identity(n, n);
  M.rightCols(B.cols()) = B.cast<std::complex<double>>();
  const RankReport report = numerical_rank(M);
  if (!rel_rank_tol) return report.rank == static_cast<int>(n);
  const double sigma_max =
      report.singular_values.size() > 0 ? report.singular_values(0) : 0.0;
  const double tol = *rel_rank_tol * sigma_max;
  return (report.singular_values.array() > tol).count() == n;
}

Eigen::VectorXcd eigenvalues_of(const Eigen::MatrixXd& A) {
  Eigen::EigenSolver<Eigen::MatrixXd> eig(A, /*computeEigenvectors=*/false);
  return eig.eigenvalues();
}

// Companion matrix of z^r + c_{r-1} z^{r-1} + ... + c_0 together with the
// standard input column e_r; controllable for any coefficient choice.
Eigen::MatrixXd companion(const Eigen::VectorXd& coeffs) {
  const int r = static_cast<int>(coeffs.size());
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(r, r);
  A.topRightCorner(r - 1, r - 1).setIdentity();
  for (int j = 0; j < r; ++j) A(r - 1, j) = -coeffs(j);
  return A;
}

// Monic polynomial coefficients from prescribed roots (conjugate-closed set),
// low degree first.
Eigen::VectorXd poly_from_roots(const std::vector<std::complex<double>>& roots) {
  std::vector<std::complex<double>> c{1.0};
  for (const auto& root : roots) {
    std::vector<std::complex<double>> next(c.size() + 1, 0.0);
    for (std::size_t i = 0; i < c.size(); ++i) {
      next[i + 1] += c[i];
      next[i] -= root * c[i];
    }
    c = std::move(next);
  }
  Eigen::VectorXd coeffs(static_cast<Eigen::Index>(c.size()) - 1);
  for (Eigen::Index i = 0; i < coeffs.size(); ++i) coeffs(i) = c[i].real();
  return coeffs;
}

// Draws a degree-r companion block with spectral radius at most 1.25 and no
// eigenvalue within 1e-6 of the unit circle. The radius cap keeps trajectory
// roundoff from outgrowing the rank tolerances at desk scale.
Eigen::MatrixXd random_companion_block(int r, Rng& rng) {
  for (int attempt = 0; attempt < 64; ++attempt) {
    const Eigen::VectorXd coeffs = rng.normal_vector(r);
    const Eigen::MatrixXd A = companion(coeffs);
    const Eigen::VectorXcd lambdas = eigenvalues_of(A);
    bool ok = true;
    for (Eigen::Index i = 0; i < lambdas.size(); ++i) {
      const double mod = std::abs(lambdas(i));
      if (mod > 1.25 || std::abs(mod - 1.0) < 1e-6) ok = false;
    }
    if (ok) return A;
  }
  // Pigeonhole escape: prescribe root moduli directly.
  std::vector<std::complex<double>> roots;
  int left = r;
  while (left > 0) {
    const double mod = rng.uniform(0.3, 0.9);
    if (left >= 2 && rng.bernoulli(0.5)) {
      const double angle = rng.uniform(0.2, M_PI - 0.2);
      roots.emplace_back(mod * std::cos(angle), mod * std::sin(angle));
      roots.emplace_back(mod * std::cos(angle), -mod * std::sin(angle));
      left -= 2;
    } else {
      roots.emplace_back(rng.bernoulli(0.5) ? mod : -mod, 0.0);
      left -= 1;
    }
  }
  return companion(poly_from_roots(roots));
}

// Upper-triangular block whose diagonal moduli land in the given range; the
// first entry uses the range verbatim, the rest stay strictly stable.
Eigen::MatrixXd triangular_block(int size, double first_lo, double first_hi,
                                 Rng& rng) {
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(size, size);
  for (int i = 0; i < size; ++i) {
    const double mod =
        i == 0 ? rng.uniform(first_lo, first_hi) : rng.uniform(0.1, 0.9);
    A(i, i) = rng.bernoulli(0.5) ? mod : -mod;
    for (int j = i + 1; j < size; ++j) A(i, j) = 0.3 * rng.normal();
  }
  return A;
}

Eigen::MatrixXd random_orthogonal(int n, Rng& rng) {
  const Eigen::MatrixXd G = rng.normal_matrix(n, n);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(G);
  Eigen::MatrixXd Q = qr.householderQ();
  const Eigen::MatrixXd R = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j)
    if (R(j, j) < 0) Q.col(j) = -Q.col(j);
  return Q;
}

// Block-triangular draw [[A_c, coupling], [0, A_u]], B = [B_c; 0]: the pair
// is uncontrollable exactly at the eigenvalues of A_u, and those are the only
// modes that can break stabilizability.
LtiSystem structured_uncontrollable(int n, int m, int r, bool stable_tail,
                                    Rng& rng) {
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(n, m);
  if (r > 0) {
    A.topLeftCorner(r, r) = random_companion_block(r, rng);
    A.topRightCorner(r, n - r) = 0.5 * rng.normal_matrix(r, n - r);
    B(r - 1, 0) = 1.0;
    for (int j = 1; j < m; ++j) B.col(j).head(r) = rng.normal_vector(r);
  }
  A.bottomRightCorner(n - r, n - r) =
      stable_tail ? triangular_block(n - r, 0.1, 0.9, rng)
                  : triangular_block(n - r, 1.05, 1.25, rng);
  const Eigen::MatrixXd Q = random_orthogonal(n, rng);
  return LtiSystem(Q * A * Q.transpose(), Q * B);
}

}  // namespace

LtiSystem::LtiSystem(Eigen::MatrixXd A_in, Eigen::MatrixXd B_in)
    : A(std::move(A_in)), B(std::move(B_in)) {
  if (A.rows() != A.cols()) throw std::invalid_argument("LtiSystem: A must be square");
  if (A.rows() < 1) throw std::invalid_argument("LtiSystem: state dimension must be positive");
  if (B.rows() != A.rows())
    throw std::invalid_argument("LtiSystem: B row count must match state dimension");
  if (B.cols() < 1) throw std::invalid_argument("LtiSystem: input dimension must be positive");
}

std::string to_string(SystemClass cls) {
  switch (cls) {
    case SystemClass::Controllable: return "controllable";
    case SystemClass::StabilizableNotControllable: return "stabilizable_not_controllable";
    case SystemClass::NotStabilizable: return "not_stabilizable";
  }
  return "unknown";
}

std::vector<Eigen::VectorXd> simulate(const LtiSystem& sys,
                                      const Eigen::VectorXd& x0,
                                      const std::vector<Eigen::VectorXd>& inputs) {
  if (x0.size() != sys.n())
    throw std::invalid_argument("simulate: initial state dimension mismatch");
  std::vector<Eigen::VectorXd> states;
  states.reserve(inputs.size() + 1);
  states.push_back(x0);
  for (const auto& u : inputs) {
    if (u.size() != sys.m())
      throw std::invalid_argument("simulate: input dimension mismatch");
    states.push_back(sys.A * states.back() + sys.B * u);
  }
  return states;
}

Subspace reachable_subspace(const Eigen::MatrixXd& A, const Eigen::MatrixXd& G) {
  if (A.rows() != A.cols()) throw std::invalid_argument("reachable_subspace: A must be square");
  if (G.rows() != A.rows())
    throw std::invalid_argument("reachable_subspace: G row count mismatch");
  const Eigen::Index n = A.rows();
  Eigen::MatrixXd blocks(n, n * G.cols());
  Eigen::MatrixXd power = G;
  for (Eigen::Index k = 0; k < n; ++k) {
    blocks.middleCols(k * G.cols(), G.cols()) = power;
    if (k + 1 < n) power = A * power;
  }
  return Subspace::image(blocks);
}

bool is_controllable_pair(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                          std::optional<double> rel_rank_tol) {
  const Eigen::VectorXcd lambdas = eigenvalues_of(A);
  for (Eigen::Index i = 0; i < lambdas.size(); ++i)
    if (!pbh_pass(A, B, lambdas(i), rel_rank_tol)) return false;
  return true;
}

bool is_stabilizable_pair(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                          std::optional<double> rel_rank_tol) {
  const Eigen::VectorXcd lambdas = eigenvalues_of(A);
  for (Eigen::Index i = 0; i < lambdas.size(); ++i) {
    if (std::abs(lambdas(i)) < 1.0 - kUnitCircleBand) continue;
    if (!pbh_pass(A, B, lambdas(i), rel_rank_tol)) return false;
  }
  return true;
}

SystemClass classify(const LtiSystem& sys) {
  if (is_controllable_pair(sys.A, sys.B)) return SystemClass::Controllable;
  if (is_stabilizable_pair(sys.A, sys.B))
    return SystemClass::StabilizableNotControllable;
  return SystemClass::NotStabilizable;
}

LtiSystem random_system(SystemClass cls, int n, int m, std::uint64_t seed) {
  if (n < 1 || m < 1)
    throw std::invalid_argument("random_system: dimensions must be positive");
  if (cls == SystemClass::StabilizableNotControllable && n < 2)
    throw std::invalid_argument(
        "random_system: no stabilizable uncontrollable system at n = 1 is generated; n >= 2 required");

  for (int attempt = 0; attempt < 32; ++attempt) {
    Rng rng(split_seed(seed, static_cast<std::uint64_t>(attempt)));
    LtiSystem candidate = [&]() -> LtiSystem {
      switch (cls) {
        case SystemClass::Controllable:
          return LtiSystem(rng.normal_matrix(n, n) / std::sqrt(double(n)),
                           rng.normal_matrix(n, m));
        case SystemClass::StabilizableNotControllable:
          return structured_uncontrollable(n, m, rng.uniform_int(1, n - 1),
                                           /*stable_tail=*/true, rng);
        case SystemClass::NotStabilizable:
          return structured_uncontrollable(n, m, rng.uniform_int(0, n - 1),
                                           /*stable_tail=*/false, rng);
      }
      throw std::logic_error("random_system: unreachable");
    }();
    if (classify(candidate) == cls) return candidate;
  }
  throw std::runtime_error("random_system: generator failed to hit the requested class");
}

std::optional<Eigen::VectorXd> adversarial_initial_state(const LtiSystem& sys,
                                                         std::uint64_t seed) {
  const Subspace reach = reachable_subspace(sys.A, sys.B);
  if (reach.dim() == sys.n()) return std::nullopt;

  Rng rng(seed);
  Eigen::VectorXd x0 = Eigen::VectorXd::Zero(sys.n());
  if (reach.dim() > 0) x0 = reach.basis() * rng.normal_vector(reach.dim());

  Eigen::MatrixXd G(sys.n(), sys.m() + 1);
  G.leftCols(sys.m()) = sys.B;
  G.col(sys.m()) = x0;
  if (reachable_subspace(sys.A, G).dim() >= sys.n())
    throw std::logic_error("adversarial_initial_state: candidate fails the reachability bound");
  return x0;
}

}  // namespace exdesign
