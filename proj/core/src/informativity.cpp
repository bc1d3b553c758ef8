#include "exdesign/informativity.hpp"

#include <stdexcept>

#include "exdesign/input_design.hpp"
#include "exdesign/synthesis.hpp"

namespace exdesign {

namespace {
constexpr double kTrajectoryResidualScale = 1e-8;
constexpr double kTrajectoryRankFloor = 1e-9;
}

std::string to_string(PriorKnowledge pk) {
  switch (pk) {
    case PriorKnowledge::All: return "all";
    case PriorKnowledge::Controllable: return "controllable";
    case PriorKnowledge::Stabilizable: return "stabilizable";
  }
  return "unknown";
}

Dataset::Dataset(std::vector<Eigen::VectorXd> inputs,
                 std::vector<Eigen::VectorXd> states)
    : inputs_(std::move(inputs)), states_(std::move(states)) {
  if (inputs_.empty()) throw std::invalid_argument("Dataset: needs at least one sample");
  if (states_.size() != inputs_.size() + 1)
    throw std::invalid_argument("Dataset: states must have exactly one more entry than inputs");
  const Eigen::Index m = inputs_.front().size();
  const Eigen::Index n = states_.front().size();
  if (m < 1 || n < 1) throw std::invalid_argument("Dataset: dimensions must be positive");
  for (const auto& u : inputs_)
    if (u.size() != m) throw std::invalid_argument("Dataset: inconsistent input dimensions");
  for (const auto& x : states_)
    if (x.size() != n) throw std::invalid_argument("Dataset: inconsistent state dimensions");
}

Eigen::MatrixXd Dataset::U_minus() const { return stack_columns(inputs_); }

Eigen::MatrixXd Dataset::X_minus() const {
  Eigen::MatrixXd X(n(), T());
  for (int t = 0; t < T(); ++t) X.col(t) = states_[t];
  return X;
}

Eigen::MatrixXd Dataset::X_plus() const {
  Eigen::MatrixXd X(n(), T());
  for (int t = 0; t < T(); ++t) X.col(t) = states_[t + 1];
  return X;
}

Eigen::MatrixXd Dataset::XU_minus() const {
  Eigen::MatrixXd Z(n() + m(), T());
  Z.topRows(n()) = X_minus();
  Z.bottomRows(m()) = U_minus();
  return Z;
}

Dataset Dataset::prefix(int t) const {
  if (t < 1 || t > T())
    throw std::invalid_argument("Dataset::prefix: length outside [1, T]");
  return Dataset(
      std::vector<Eigen::VectorXd>(inputs_.begin(), inputs_.begin() + t),
      std::vector<Eigen::VectorXd>(states_.begin(), states_.begin() + t + 1));
}

Dataset collect_dataset(const LtiSystem& sys, const Eigen::VectorXd& x0,
                        const std::vector<Eigen::VectorXd>& inputs) {
  return Dataset(inputs, simulate(sys, x0, inputs));
}

bool is_trajectory_of(const Dataset& data, const LtiSystem& sys) {
  if (sys.n() != data.n() || sys.m() != data.m()) return false;
  const Eigen::MatrixXd X_plus = data.X_plus();
  const double residual =
      (sys.A * data.X_minus() + sys.B * data.U_minus() - X_plus).norm();
  return residual <= kTrajectoryResidualScale * (1.0 + X_plus.norm());
}

double trajectory_rank_tol(const Eigen::MatrixXd& M) {
  if (M.size() == 0 || M.norm() == 0.0) return 0.0;
  const double sigma_max = Eigen::JacobiSVD<Eigen::MatrixXd>(M).singularValues()(0);
  return std::max(default_rank_tol(M.rows(), M.cols(), sigma_max),
                  kTrajectoryRankFloor * sigma_max);
}

RankReport trajectory_rank(const Eigen::MatrixXd& M) {
  RankReport report = numerical_rank(M);
  const double sigma_max =
      report.singular_values.size() > 0 ? report.singular_values(0) : 0.0;
  const double floor_tol = kTrajectoryRankFloor * sigma_max;
  if (floor_tol > report.tol_used) {
    report.tol_used = floor_tol;
    report.rank =
        static_cast<int>((report.singular_values.array() > floor_tol).count());
  }
  return report;
}

Subspace trajectory_image(const Eigen::MatrixXd& M) {
  return Subspace::image(M, trajectory_rank_tol(M));
}

std::vector<std::pair<Eigen::MatrixXd, Eigen::MatrixXd>>
ConsistentSet::kernel_basis() const {
  std::vector<std::pair<Eigen::MatrixXd, Eigen::MatrixXd>> basis;
  const int n = state_dim();
  const int m = input_dim();
  for (Eigen::Index d = 0; d < kernel_directions.cols(); ++d) {
    const Eigen::VectorXd w = kernel_directions.col(d);
    for (int row = 0; row < n; ++row) {
      Eigen::MatrixXd Ahat = Eigen::MatrixXd::Zero(n, n);
      Eigen::MatrixXd Bhat = Eigen::MatrixXd::Zero(n, m);
      Ahat.row(row) = w.head(n).transpose();
      Bhat.row(row) = w.tail(m).transpose();
      basis.emplace_back(std::move(Ahat), std::move(Bhat));
    }
  }
  return basis;
}

ConsistentSet consistent_set(const Dataset& data) {
  const int n = data.n();
  const int m = data.m();
  const Eigen::MatrixXd Z = data.XU_minus();
  const Eigen::MatrixXd X_plus = data.X_plus();

  ConsistentSet set;
  const Eigen::MatrixXd AB = X_plus * pseudo_inverse(Z);  // min-norm particular
  set.A0 = AB.leftCols(n);
  set.B0 = AB.rightCols(m);
  const double residual = (AB * Z - X_plus).norm();
  set.is_consistent = residual <= kTrajectoryResidualScale * (1.0 + X_plus.norm());

  const std::vector<Eigen::VectorXd> kernel =
      left_kernel_basis(Z, trajectory_rank_tol(Z));
  set.kernel_directions = Eigen::MatrixXd(n + m, static_cast<Eigen::Index>(kernel.size()));
  for (std::size_t i = 0; i < kernel.size(); ++i)
    set.kernel_directions.col(static_cast<Eigen::Index>(i)) = kernel[i];
  return set;
}

Verdict informative_for_identification(const Dataset& data, PriorKnowledge) {
  Verdict verdict;
  verdict.xu_rank = trajectory_rank(data.XU_minus());
  verdict.x_rank = trajectory_rank(data.X_minus());
  const bool full = verdict.xu_rank.rank == data.n() + data.m();
  verdict.conditions["XU_full_row_rank"] = full;
  verdict.informative = full;
  if (full) {
    const ConsistentSet set = consistent_set(data);
    if (set.is_consistent) verdict.identified = LtiSystem(set.A0, set.B0);
  }
  return verdict;
}

Verdict informative_for_stabilization(const Dataset& data, PriorKnowledge pk) {
  return stabilize_with_prior(data, pk).verdict;
}

std::map<std::string, bool> DataRichnessReport::to_map() const {
  std::map<std::string, bool> map;
  if (reachable_product) map["reachable_product"] = *reachable_product;
  map["state_product"] = state_product;
  map["pe_sufficient"] = pe_sufficient;
  map["image_product_condition"] = image_product_condition;
  map["imXplus_in_imXminus"] = imXplus_in_imXminus;
  return map;
}

DataRichnessReport data_richness_conditions(const Dataset& data,
                                            const std::optional<LtiSystem>& sys) {
  const int n = data.n();
  const int m = data.m();
  const Eigen::MatrixXd X_minus = data.X_minus();
  const Eigen::MatrixXd XU = data.XU_minus();
  const int rank_x = trajectory_rank(X_minus).rank;
  const int rank_xu = trajectory_rank(XU).rank;

  DataRichnessReport report;
  report.image_product_condition = rank_xu == rank_x + m;
  report.imXplus_in_imXminus =
      trajectory_image(X_minus).contains(trajectory_image(data.X_plus()));
  report.state_product =
      report.image_product_condition && report.imXplus_in_imXminus;
  report.pe_sufficient = pe_order(data.inputs()) >= n + 1;

  if (sys) {
    if (!is_trajectory_of(data, *sys))
      throw std::invalid_argument(
          "data_richness_conditions: data is not a trajectory of the given system");
    Eigen::MatrixXd G(n, m + 1);
    G.leftCols(m) = sys->B;
    G.col(m) = data.states().front();
    const Subspace reach = reachable_subspace(sys->A, G);
    report.reachable_product =
        product_with_full_space(reach, m).equals(trajectory_image(XU));
  }
  return report;
}

}  // namespace exdesign
