#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "exdesign/informativity.hpp"

namespace exdesign {

enum class GainBranch { FullRank, SubspaceRestricted };

std::string to_string(GainBranch branch);

/// A feedback gain together with the data-level witness that certifies it.
///
/// FullRank: K = U- Theta (X- Theta)^-1 where Theta makes X- Theta symmetric
/// positive definite and the block matrix [[X- Theta, X+ Theta],
/// [(X+ Theta)^T, X- Theta]] positive definite; the closed-loop radius on data
/// is spectral_radius(X+ Theta (X- Theta)^-1).
///
/// SubspaceRestricted: K = K_r V^T where V spans im X-, (A_r, B_r) are the
/// dynamics identified on that subspace and A_r + B_r K_r is Schur.
struct GainCertificate {
  Eigen::MatrixXd K;  // m x n
  double closed_loop_radius_on_data = 0.0;
  GainBranch branch = GainBranch::FullRank;
  Eigen::MatrixXd theta;  // T x n, FullRank witness
  Eigen::MatrixXd A_r, B_r, V, K_r;  // SubspaceRestricted witness
};

/// Raised when an operation requires informative data and the rank condition
/// fails; carries the rank diagnostics of the offending block.
class NotInformativeError : public std::runtime_error {
 public:
  NotInformativeError(const std::string& message, RankReport report)
      : std::runtime_error(message), rank_report(std::move(report)) {}
  RankReport rank_report;
};

/// The unique system consistent with identification-informative data.
/// Throws NotInformativeError when [X-; U-] is row-rank deficient.
LtiSystem identify(const Dataset& data);

/// Gain synthesis without rank deficiency. Requires X- to have full row rank
/// (throws NotInformativeError otherwise) and returns nullopt when no
/// common stabilizer of the consistent set exists.
std::optional<GainCertificate> stabilize_fullrank(const Dataset& data);

/// Dynamics of the consistent systems restricted to im X-. Requires
/// im X+ <= im X- and rank [X-; U-] = rank X- + m, which make the restricted
/// pair unique.
struct RestrictedDynamics {
  Eigen::MatrixXd A_r;  // r x r
  Eigen::MatrixXd B_r;  // r x m
  Eigen::MatrixXd V;    // n x r, orthonormal basis of im X-
};
RestrictedDynamics restricted_dynamics(const Dataset& data);

/// Verdict plus certificate for stabilization under the given prior
/// knowledge. Dispatches between the full-row-rank synthesis and the
/// subspace-restricted synthesis that stabilizability prior knowledge
/// enables on rank-deficient data.
struct StabilizationOutcome {
  Verdict verdict;
  std::optional<GainCertificate> certificate;
  bool informative() const { return verdict.informative; }
};
StabilizationOutcome stabilize_with_prior(const Dataset& data, PriorKnowledge pk);

/// Samples systems consistent with the data (filtered to the prior-knowledge
/// set) and counts how many the gain stabilizes.
struct GainAudit {
  int requested = 0;
  int tested = 0;
  int stabilized = 0;
  double max_radius = 0.0;
  bool all_stabilized() const { return tested > 0 && stabilized == tested; }
};
GainAudit verify_gain_on_consistent_set(const Dataset& data, PriorKnowledge pk,
                                        const Eigen::MatrixXd& K, int samples,
                                        std::uint64_t seed);

/// Stabilizer of an arbitrary pair via Riccati iteration with identity
/// weights; falls back to pole placement at 0.5 on the controllable block if
/// the iteration stalls. Returns nullopt for unstabilizable pairs; the
/// stabilizability decision applies a relative rank floor of 1e-7, suited to
/// pairs assembled from measured data.
std::optional<Eigen::MatrixXd> stabilizing_gain(const Eigen::MatrixXd& A,
                                                const Eigen::MatrixXd& B);

/// Places every controllable mode at the given pole; modes outside the
/// controllable subspace are untouched. Requires |pole| < 1 for a stabilizing
/// result on stabilizable pairs. rel_rank_tol widens the rank cut separating
/// the controllable block, as in the pair tests.
Eigen::MatrixXd pole_placement_gain(const Eigen::MatrixXd& A,
                                    const Eigen::MatrixXd& B, double pole,
                                    std::optional<double> rel_rank_tol = std::nullopt);

/// Solves P = A P A^T + Q; unique for Schur A.
Eigen::MatrixXd solve_discrete_lyapunov(const Eigen::MatrixXd& A,
                                        const Eigen::MatrixXd& Q);

}  // namespace exdesign
