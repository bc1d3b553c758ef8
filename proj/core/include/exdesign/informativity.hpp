#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "exdesign/linalg.hpp"
#include "exdesign/system.hpp"

namespace exdesign {

/// Prior knowledge about the data-generating system: nothing, controllability,
/// or stabilizability.
enum class PriorKnowledge { All, Controllable, Stabilizable };

std::string to_string(PriorKnowledge pk);

/// Input-state record (u(0..T-1), x(0..T)) with the derived data blocks
/// U- = [u(0) ... u(T-1)], X- = [x(0) ... x(T-1)], X+ = [x(1) ... x(T)].
class Dataset {
 public:
  Dataset(std::vector<Eigen::VectorXd> inputs, std::vector<Eigen::VectorXd> states);

  int T() const { return static_cast<int>(inputs_.size()); }
  int n() const { return static_cast<int>(states_.front().size()); }
  int m() const { return static_cast<int>(inputs_.front().size()); }

  const std::vector<Eigen::VectorXd>& inputs() const { return inputs_; }
  const std::vector<Eigen::VectorXd>& states() const { return states_; }

  Eigen::MatrixXd U_minus() const;  // m x T
  Eigen::MatrixXd X_minus() const;  // n x T
  Eigen::MatrixXd X_plus() const;   // n x T

  /// Stacked block [X-; U-] of size (n+m) x T.
  Eigen::MatrixXd XU_minus() const;

  /// The first t steps: inputs u(0..t-1) and states x(0..t). Requires 1 <= t <= T.
  Dataset prefix(int t) const;

 private:
  std::vector<Eigen::VectorXd> inputs_;
  std::vector<Eigen::VectorXd> states_;
};

/// Convenience wrapper: simulate and package the trajectory as a Dataset.
Dataset collect_dataset(const LtiSystem& sys, const Eigen::VectorXd& x0,
                        const std::vector<Eigen::VectorXd>& inputs);

/// Residual test for "the data is a trajectory of sys":
/// ||A X- + B U- - X+||_F <= 1e-8 * (1 + ||X+||_F).
bool is_trajectory_of(const Dataset& data, const LtiSystem& sys);

/// Rank threshold for blocks of collected data: the standard threshold with a
/// relative floor of 1e-9 * sigma_max. Multi-step simulation or measurement
/// roundoff accumulates orders of magnitude beyond machine epsilon, and the
/// floor keeps rank decisions on trajectories away from that regime. The
/// RankReport records the threshold actually used.
double trajectory_rank_tol(const Eigen::MatrixXd& M);
RankReport trajectory_rank(const Eigen::MatrixXd& M);
Subspace trajectory_image(const Eigen::MatrixXd& M);

/// Affine parametrization of every (A, B) with A X- + B U- = X+. Elements are
/// (A0, B0) plus arbitrary row-combinations of the kernel directions.
struct ConsistentSet {
  bool is_consistent = false;
  Eigen::MatrixXd A0;                 // n x n particular solution
  Eigen::MatrixXd B0;                 // n x m particular solution
  Eigen::MatrixXd kernel_directions;  // (n+m) x d, orthonormal columns w with w^T [X-;U-] = 0

  int state_dim() const { return static_cast<int>(A0.rows()); }
  int input_dim() const { return static_cast<int>(B0.cols()); }
  int kernel_dim() const {
    return state_dim() * static_cast<int>(kernel_directions.cols());
  }
  bool singleton() const { return kernel_directions.cols() == 0; }

  /// Basis of the solution set of [Ahat Bhat] [X-; U-] = 0, materialized as
  /// one (Ahat, Bhat) pair per (row, direction) combination.
  std::vector<std::pair<Eigen::MatrixXd, Eigen::MatrixXd>> kernel_basis() const;
};

ConsistentSet consistent_set(const Dataset& data);

/// Informativity decision plus the diagnostics it was made from.
struct Verdict {
  bool informative = false;
  RankReport xu_rank;  // of [X-; U-]
  RankReport x_rank;   // of X-
  std::map<std::string, bool> conditions;
  std::optional<LtiSystem> identified;   // certificate for identification
  std::optional<Eigen::MatrixXd> gain;   // certificate for stabilization
};

/// The data pins down a unique system among all candidates compatible with the
/// prior knowledge iff [X-; U-] has full row rank n+m; the verdict is the same
/// for all three priors.
Verdict informative_for_identification(const Dataset& data, PriorKnowledge pk);

/// One gain stabilizes every system compatible with both the data and the
/// prior knowledge. Without rank deficiency this needs X- full row rank plus a
/// feasible gain-synthesis problem; under stabilizability prior knowledge a
/// rank-deficient X- is handled through the subspace conditions
/// im X+ <= im X- and rank [X-; U-] = rank X- + m.
Verdict informative_for_stabilization(const Dataset& data, PriorKnowledge pk);

/// Structural subspace conditions on a trajectory:
///   reachable_product:  im [X-; U-] = R(A, [B x(0)]) x R^m   (needs the system)
///   state_product:      im [X-; U-] = im X- x R^m  and  im X+ <= im X-
///   pe_sufficient:      the input is persistently exciting of order n+1
/// The first two are equivalent for any trajectory, and a persistently
/// exciting input of order n+1 implies both.
struct DataRichnessReport {
  std::optional<bool> reachable_product;
  bool state_product = false;
  bool pe_sufficient = false;
  // sub-diagnostics of state_product
  bool image_product_condition = false;  // rank [X-; U-] = rank X- + m
  bool imXplus_in_imXminus = false;

  std::map<std::string, bool> to_map() const;
};

/// When sys is given, the data must be one of its trajectories (residual
/// checked); throws otherwise.
DataRichnessReport data_richness_conditions(
    const Dataset& data, const std::optional<LtiSystem>& sys = std::nullopt);

}  // namespace exdesign
