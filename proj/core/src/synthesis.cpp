#include "exdesign/synthesis.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "exdesign/rng.hpp"

namespace exdesign {

namespace {

constexpr double kResidualScale = 1e-9;
constexpr double kStrictnessMargin = 1e-7;  // "positive definite" means >= this
constexpr int kRiccatiMaxIterations = 10000;

// Rank floor for stabilizability decisions on pairs assembled from data:
// least-squares and pseudo-inverse steps leave errors far above machine
// epsilon, so control authority below this relative level counts as roundoff.
constexpr double kDataPbhTol = 1e-7;

bool stabilizable_from_data(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
  Eigen::MatrixXd B_image = Eigen::MatrixXd::Zero(A.rows(), 1);
  if (B.cols() > 0 && B.norm() > 0.0) {
    // Only the image of B matters; the orthonormal compression removes the
    // input scale from the rank test. The floor is anchored at the pair's
    // scale: an input matrix that is small against it is roundoff, not
    // control authority.
    const double sigma_max = Eigen::JacobiSVD<Eigen::MatrixXd>(B).singularValues()(0);
    const double reference = std::max({1.0, A.norm(), sigma_max});
    const Subspace significant = Subspace::image(B, kDataPbhTol * reference);
    if (significant.dim() > 0) B_image = significant.basis();
  }
  return is_stabilizable_pair(A, B_image, kDataPbhTol);
}

// Every right inverse of X- is Xpinv + N W, so the achievable closed loops
// X+ G form the affine family A0 + C W. A common stabilizer of the consistent
// set exists iff the pair (A0, C) is stabilizable.
struct RightInverseFamily {
  Eigen::MatrixXd Xpinv;  // T x n
  Eigen::MatrixXd N;      // T x T projector onto ker X-
  Eigen::MatrixXd A0;     // n x n
  Eigen::MatrixXd C;      // n x T
};

RightInverseFamily right_inverse_family(const Eigen::MatrixXd& X_minus,
                                        const Eigen::MatrixXd& X_plus) {
  RightInverseFamily fam;
  fam.Xpinv = pseudo_inverse(X_minus);
  fam.N = Eigen::MatrixXd::Identity(X_minus.cols(), X_minus.cols()) -
          fam.Xpinv * X_minus;
  fam.A0 = X_plus * fam.Xpinv;
  fam.C = X_plus * fam.N;
  return fam;
}

double min_eigenvalue(const Eigen::MatrixXd& symmetric) {
  if (symmetric.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(symmetric);
  return eig.eigenvalues().minCoeff();
}

}  // namespace

std::string to_string(GainBranch branch) {
  return branch == GainBranch::FullRank ? "full_rank" : "subspace_restricted";
}

LtiSystem identify(const Dataset& data) {
  const Verdict verdict = informative_for_identification(data, PriorKnowledge::All);
  if (!verdict.informative)
    throw NotInformativeError("identify: [X-; U-] is row-rank deficient",
                              verdict.xu_rank);

  const int n = data.n();
  const Eigen::MatrixXd Z = data.XU_minus();
  const Eigen::MatrixXd X_plus = data.X_plus();
  const Eigen::MatrixXd AB =
      Z.transpose().colPivHouseholderQr().solve(X_plus.transpose()).transpose();
  const double residual = (AB * Z - X_plus).norm();
  if (residual > kResidualScale * (1.0 + X_plus.norm()))
    throw std::runtime_error(
        "identify: no system reproduces the data (residual " +
        std::to_string(residual) + ")");
  return LtiSystem(AB.leftCols(n), AB.rightCols(data.m()));
}

std::optional<GainCertificate> stabilize_fullrank(const Dataset& data) {
  const int n = data.n();
  const int m = data.m();
  const Eigen::MatrixXd X_minus = data.X_minus();
  const Eigen::MatrixXd X_plus = data.X_plus();
  const RankReport x_rank = trajectory_rank(X_minus);
  if (x_rank.rank != n)
    throw NotInformativeError("stabilize_fullrank: X- is row-rank deficient",
                              x_rank);

  Eigen::MatrixXd G;  // right inverse of X- realizing the gain
  Eigen::MatrixXd A_cl;

  const ConsistentSet set = consistent_set(data);
  if (set.singleton() && set.is_consistent) {
    // The data pins a single system, so a common stabilizer exists iff that
    // system is stabilizable; synthesizing on it keeps every quantity at the
    // plant scale instead of the pseudo-inverse scale.
    const std::optional<Eigen::MatrixXd> K = stabilizing_gain(set.A0, set.B0);
    if (!K) return std::nullopt;
    Eigen::MatrixXd target(n + m, n);
    target.topRows(n) = Eigen::MatrixXd::Identity(n, n);
    target.bottomRows(m) = *K;
    G = pseudo_inverse(data.XU_minus()) * target;  // X- G = I and U- G = K
    A_cl = set.A0 + set.B0 * (*K);
  } else {
    // A continuum of consistent systems: search over the right-inverse family
    // X-^+ + N W directly. Row equilibration z = D x transforms the
    // consistent systems by a fixed similarity, so feasibility and the
    // achievable gains are unchanged while the solves condition better.
    Eigen::VectorXd scale(n);
    const double max_row = X_minus.rowwise().norm().maxCoeff();
    for (int i = 0; i < n; ++i)
      scale(i) =
          1.0 / std::max(X_minus.row(i).norm(), 1e-12 * std::max(max_row, 1.0));
    const Eigen::MatrixXd Xm_bal = scale.asDiagonal() * X_minus;
    const Eigen::MatrixXd Xp_bal = scale.asDiagonal() * X_plus;

    const RightInverseFamily fam = right_inverse_family(Xm_bal, Xp_bal);

    // Steering directions below the measurement floor are roundoff, not
    // control authority; truncating them keeps the feasibility decision and
    // the Riccati recursion away from noise.
    const double sigma_cut = kDataPbhTol * std::max(Xp_bal.norm(), Xm_bal.norm());
    Eigen::JacobiSVD<Eigen::MatrixXd> c_svd(
        fam.C, Eigen::ComputeThinU | Eigen::ComputeThinV);
    Eigen::MatrixXd C_trunc = Eigen::MatrixXd::Zero(fam.C.rows(), fam.C.cols());
    {
      const Eigen::VectorXd sv = c_svd.singularValues();
      for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > sigma_cut)
          C_trunc +=
              sv(i) * c_svd.matrixU().col(i) * c_svd.matrixV().col(i).transpose();
    }

    const double c_scale = std::max(1.0, C_trunc.norm());
    std::optional<Eigen::MatrixXd> W = stabilizing_gain(fam.A0, C_trunc / c_scale);
    if (!W) return std::nullopt;
    *W /= c_scale;

    G = (fam.Xpinv + fam.N * (*W)) * scale.asDiagonal();
    A_cl = X_plus * G;
  }

  // A boundary loop that lost the Schur margin counts as infeasible.
  if (!is_schur(A_cl)) return std::nullopt;

  // Witness: with P solving P = A_cl P A_cl^T + I, Theta = G P gives
  // X- Theta = P > 0 and Schur complement P - A_cl P A_cl^T = I.
  Eigen::MatrixXd P = solve_discrete_lyapunov(A_cl, Eigen::MatrixXd::Identity(n, n));
  P = 0.5 * (P + P.transpose());
  Eigen::MatrixXd theta = G * P;

  // Definiteness of the block [[P, A_cl P], [P A_cl^T, P]] follows from the
  // congruence with diag(P - A_cl P A_cl^T, P); the eigenvalue bound below
  // avoids forming the badly scaled block. The constraint is homogeneous in
  // Theta, so the strictness margin can always be met by scaling.
  Eigen::MatrixXd complement = P - A_cl * P * A_cl.transpose();
  complement = 0.5 * (complement + complement.transpose());
  const double lambda_P = min_eigenvalue(P);
  const double lambda_S = min_eigenvalue(complement);
  // A witness too close to the definiteness boundary cannot be certified at
  // the strictness margin; those cases count as infeasible.
  if (lambda_P <= 0.0 || lambda_S <= 0.0) return std::nullopt;
  const double denom = 1.0 + A_cl.norm();
  const double block_lower_bound = std::min(lambda_P, lambda_S) / (denom * denom);
  if (block_lower_bound < kStrictnessMargin)
    theta *= 2.0 * kStrictnessMargin / block_lower_bound;

  GainCertificate cert;
  cert.branch = GainBranch::FullRank;
  cert.K = data.U_minus() * G;
  cert.theta = theta;
  cert.closed_loop_radius_on_data = spectral_radius(A_cl);
  return cert;
}

RestrictedDynamics restricted_dynamics(const Dataset& data) {
  const int n = data.n();
  const int m = data.m();
  const Eigen::MatrixXd X_minus = data.X_minus();
  const Eigen::MatrixXd X_plus = data.X_plus();
  const Subspace im_x = trajectory_image(X_minus);
  const int r = im_x.dim();

  if (!im_x.contains(trajectory_image(X_plus)))
    throw std::invalid_argument("restricted_dynamics: im X+ is not contained in im X-");
  if (trajectory_rank(data.XU_minus()).rank != r + m)
    throw std::invalid_argument(
        "restricted_dynamics: rank [X-; U-] differs from rank X- + m");

  RestrictedDynamics rd;
  rd.V = im_x.basis();
  Eigen::MatrixXd Zr(r + m, data.T());
  Zr.topRows(r) = rd.V.transpose() * X_minus;
  Zr.bottomRows(m) = data.U_minus();
  const Eigen::MatrixXd Xr_plus = rd.V.transpose() * X_plus;
  const Eigen::MatrixXd M =
      Zr.transpose().colPivHouseholderQr().solve(Xr_plus.transpose()).transpose();
  const double residual = (M * Zr - Xr_plus).norm();
  if (residual > kResidualScale * (1.0 + Xr_plus.norm()))
    throw std::runtime_error("restricted_dynamics: restricted system equation is inconsistent");
  rd.A_r = M.leftCols(r);
  rd.B_r = M.rightCols(m);
  return rd;
}

StabilizationOutcome stabilize_with_prior(const Dataset& data, PriorKnowledge pk) {
  const int n = data.n();
  const int m = data.m();

  StabilizationOutcome out;
  out.verdict.xu_rank = trajectory_rank(data.XU_minus());
  out.verdict.x_rank = trajectory_rank(data.X_minus());
  const bool full_row_rank = out.verdict.x_rank.rank == n;
  out.verdict.conditions["Xminus_full_row_rank"] = full_row_rank;

  if (pk != PriorKnowledge::Stabilizable || full_row_rank) {
    if (!full_row_rank) {
      out.verdict.conditions["sdp_feasible"] = false;
      return out;
    }
    out.certificate = stabilize_fullrank(data);
    out.verdict.conditions["sdp_feasible"] = out.certificate.has_value();
    out.verdict.informative = out.certificate.has_value();
  } else {
    const Subspace im_x = trajectory_image(data.X_minus());
    const bool containment = im_x.contains(trajectory_image(data.X_plus()));
    const bool product = out.verdict.xu_rank.rank == im_x.dim() + m;
    out.verdict.conditions["imXplus_in_imXminus"] = containment;
    out.verdict.conditions["image_product_condition"] = product;
    out.verdict.informative = containment && product;
    if (out.verdict.informative) {
      const RestrictedDynamics rd = restricted_dynamics(data);
      const int r = static_cast<int>(rd.A_r.rows());
      Eigen::MatrixXd K_r(m, r);
      if (r > 0) {
        const std::optional<Eigen::MatrixXd> gain = stabilizing_gain(rd.A_r, rd.B_r);
        if (!gain)
          throw std::runtime_error(
              "stabilize_with_prior: restricted pair is not stabilizable; the data "
              "contradicts the stabilizability prior");
        K_r = *gain;
      }
      GainCertificate cert;
      cert.branch = GainBranch::SubspaceRestricted;
      cert.A_r = rd.A_r;
      cert.B_r = rd.B_r;
      cert.V = rd.V;
      cert.K_r = K_r;
      cert.K = K_r * rd.V.transpose();
      cert.closed_loop_radius_on_data =
          r > 0 ? spectral_radius(rd.A_r + rd.B_r * K_r) : 0.0;
      out.certificate = std::move(cert);
    }
  }
  if (out.certificate) out.verdict.gain = out.certificate->K;
  return out;
}

GainAudit verify_gain_on_consistent_set(const Dataset& data, PriorKnowledge pk,
                                        const Eigen::MatrixXd& K, int samples,
                                        std::uint64_t seed) {
  if (samples < 1)
    throw std::invalid_argument("verify_gain_on_consistent_set: samples must be positive");
  const ConsistentSet set = consistent_set(data);
  const int n = set.state_dim();
  const Eigen::Index d = set.kernel_directions.cols();

  GainAudit audit;
  audit.requested = samples;

  const auto admit = [&](const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
    switch (pk) {
      case PriorKnowledge::All: return true;
      case PriorKnowledge::Controllable: return is_controllable_pair(A, B);
      case PriorKnowledge::Stabilizable: return is_stabilizable_pair(A, B);
    }
    return false;
  };
  const auto record = [&](const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
    const double radius = spectral_radius(A + B * K);
    ++audit.tested;
    if (radius < 1.0) ++audit.stabilized;
    audit.max_radius = std::max(audit.max_radius, radius);
  };

  if (set.singleton()) {
    record(set.A0, set.B0);
    return audit;
  }

  if (admit(set.A0, set.B0)) record(set.A0, set.B0);

  Rng rng(seed);
  const double scales[] = {1.0, 10.0, 0.1};
  int attempts = 0;
  const int max_attempts = 100 * samples;
  while (audit.tested < samples && attempts < max_attempts) {
    const double scale = scales[attempts % 3];
    ++attempts;
    Eigen::MatrixXd R = rng.normal_matrix(n, static_cast<int>(d));
    const double norm = R.norm();
    if (norm == 0.0) continue;
    const Eigen::MatrixXd delta =
        (scale / norm) * R * set.kernel_directions.transpose();
    const Eigen::MatrixXd A = set.A0 + delta.leftCols(n);
    const Eigen::MatrixXd B = set.B0 + delta.rightCols(set.input_dim());
    if (admit(A, B)) record(A, B);
  }
  return audit;
}

std::optional<Eigen::MatrixXd> stabilizing_gain(const Eigen::MatrixXd& A,
                                                const Eigen::MatrixXd& B) {
  const int n = static_cast<int>(A.rows());
  const int m = static_cast<int>(B.cols());
  if (A.rows() != A.cols() || B.rows() != A.rows())
    throw std::invalid_argument("stabilizing_gain: dimension mismatch");
  if (n == 0) return Eigen::MatrixXd(m, 0);
  if (!stabilizable_from_data(A, B)) return std::nullopt;

  const Eigen::MatrixXd Q = Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd R = Eigen::MatrixXd::Identity(m, m);
  Eigen::MatrixXd P = Q;
  bool converged = false;
  for (int iter = 0; iter < kRiccatiMaxIterations; ++iter) {
    const Eigen::MatrixXd BtPA = B.transpose() * P * A;
    const Eigen::MatrixXd gain =
        (R + B.transpose() * P * B).llt().solve(BtPA);
    Eigen::MatrixXd next = Q + A.transpose() * P * A - BtPA.transpose() * gain;
    next = 0.5 * (next + next.transpose());
    const double delta = (next - P).norm();
    P = next;
    if (delta <= 1e-12 * (1.0 + P.norm())) {
      converged = true;
      break;
    }
  }
  if (converged) {
    const Eigen::MatrixXd K =
        -(R + B.transpose() * P * B).llt().solve(B.transpose() * P * A);
    if (is_schur(A + B * K)) return K;
  }
  const Eigen::MatrixXd K = pole_placement_gain(A, B, 0.5, kDataPbhTol);
  if (is_schur(A + B * K)) return K;
  return std::nullopt;
}

namespace {

// Single-input reduction: for a controllable pair, returns F and g such that
// (A + B F, B g) is controllable with g a standard basis vector.
void heymann_reduction(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                       Eigen::MatrixXd& F, Eigen::VectorXd& g) {
  const int r = static_cast<int>(A.rows());
  const int m = static_cast<int>(B.cols());
  int first = -1;
  for (int j = 0; j < m && first < 0; ++j)
    if (B.col(j).norm() > 1e-12) first = j;
  if (first < 0)
    throw std::runtime_error("single-input reduction: B is numerically zero");
  g = Eigen::VectorXd::Unit(m, first);

  Eigen::MatrixXd chain(r, r);
  Eigen::MatrixXd controls = Eigen::MatrixXd::Zero(m, r);
  chain.col(0) = B * g;
  for (int k = 1; k < r; ++k) {
    const Subspace span = Subspace::image(chain.leftCols(k));
    bool extended = false;
    for (int c = 0; c <= m && !extended; ++c) {
      const Eigen::VectorXd u = c == 0 ? Eigen::VectorXd::Zero(m).eval()
                                       : Eigen::VectorXd::Unit(m, c - 1).eval();
      const Eigen::VectorXd next = A * chain.col(k - 1) + B * u;
      if (span.residual(next) > 1e-10 * (1.0 + next.norm())) {
        chain.col(k) = next;
        controls.col(k - 1) = u;
        extended = true;
      }
    }
    if (!extended)
      throw std::runtime_error("single-input reduction: chain stalled on a controllable pair");
  }
  F = controls * chain.inverse();
}

}  // namespace

Eigen::MatrixXd pole_placement_gain(const Eigen::MatrixXd& A,
                                    const Eigen::MatrixXd& B, double pole,
                                    std::optional<double> rel_rank_tol) {
  const int n = static_cast<int>(A.rows());
  const int m = static_cast<int>(B.cols());
  Eigen::MatrixXd ctrb(n, static_cast<Eigen::Index>(n) * m);
  Eigen::MatrixXd power = B;
  for (int k = 0; k < n; ++k) {
    ctrb.middleCols(static_cast<Eigen::Index>(k) * m, m) = power;
    if (k + 1 < n) power = A * power;
  }
  std::optional<double> cut;
  if (rel_rank_tol && ctrb.norm() > 0.0)
    cut = *rel_rank_tol *
          Eigen::JacobiSVD<Eigen::MatrixXd>(ctrb).singularValues()(0);
  const Subspace reach = Subspace::image(ctrb, cut);
  const int r = reach.dim();
  if (r == 0) return Eigen::MatrixXd::Zero(m, n);

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(reach.basis(), Eigen::ComputeFullU);
  const Eigen::MatrixXd T = svd.matrixU();  // [im X- basis | complement]
  const Eigen::MatrixXd At = T.transpose() * A * T;
  const Eigen::MatrixXd Bt = T.transpose() * B;
  const Eigen::MatrixXd A11 = At.topLeftCorner(r, r);
  const Eigen::MatrixXd B1 = Bt.topRows(r);

  Eigen::MatrixXd F;
  Eigen::VectorXd g;
  heymann_reduction(A11, B1, F, g);
  const Eigen::MatrixXd Abar = A11 + B1 * F;
  const Eigen::VectorXd b = B1 * g;

  Eigen::MatrixXd chain_ctrb(r, r);
  Eigen::VectorXd col = b;
  for (int k = 0; k < r; ++k) {
    chain_ctrb.col(k) = col;
    col = Abar * col;
  }
  Eigen::MatrixXd shifted = Eigen::MatrixXd::Identity(r, r);
  const Eigen::MatrixXd factor = Abar - pole * Eigen::MatrixXd::Identity(r, r);
  for (int k = 0; k < r; ++k) shifted = shifted * factor;

  const Eigen::RowVectorXd last_row =
      Eigen::VectorXd::Unit(r, r - 1).transpose() * chain_ctrb.inverse();
  const Eigen::RowVectorXd k_si = -last_row * shifted;

  Eigen::MatrixXd K_block = Eigen::MatrixXd::Zero(m, n);
  K_block.leftCols(r) = F + g * k_si;
  return K_block * T.transpose();
}

Eigen::MatrixXd solve_discrete_lyapunov(const Eigen::MatrixXd& A,
                                        const Eigen::MatrixXd& Q) {
  const int n = static_cast<int>(A.rows());
  if (A.rows() != A.cols() || Q.rows() != n || Q.cols() != n)
    throw std::invalid_argument("solve_discrete_lyapunov: dimension mismatch");
  if (n == 0) return Eigen::MatrixXd(0, 0);

  // vec(P) - (A (x) A) vec(P) = vec(Q), column-major vectorization.
  Eigen::MatrixXd M = Eigen::MatrixXd::Identity(n * n, n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      M.block(i * n, j * n, n, n) -= A(i, j) * A;
  // Kronecker blocks above index vec by (column i of P) stacking; both sides
  // use the same convention so the reshape below is consistent.
  Eigen::VectorXd q(n * n);
  for (int c = 0; c < n; ++c) q.segment(c * n, n) = Q.col(c);
  const Eigen::VectorXd p = M.partialPivLu().solve(q);
  Eigen::MatrixXd P(n, n);
  for (int c = 0; c < n; ++c) P.col(c) = p.segment(c * n, n);
  return P;
}

}  // namespace exdesign
