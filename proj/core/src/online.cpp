#include "exdesign/online.hpp"

#include <cmath>
#include <stdexcept>

#include "exdesign/rng.hpp"

namespace exdesign {

namespace {

// Line-5 membership test: projection residual against 1e-8 * (1 + ||x||).
constexpr double kMembershipScale = 1e-8;

double membership_tol(const Eigen::VectorXd& x) {
  return kMembershipScale * (1.0 + x.norm());
}

}  // namespace

SimulatedPlant::SimulatedPlant(LtiSystem sys, Eigen::VectorXd x0)
    : sys_(std::move(sys)), state_(std::move(x0)) {
  if (state_.size() != sys_.n())
    throw std::invalid_argument("SimulatedPlant: initial state dimension mismatch");
}

Eigen::VectorXd SimulatedPlant::initial_state() {
  if (initial_read_)
    throw std::logic_error("SimulatedPlant: initial state was already read");
  initial_read_ = true;
  return state_;
}

Eigen::VectorXd SimulatedPlant::step(const Eigen::VectorXd& u) {
  if (u.size() != sys_.m())
    throw std::invalid_argument("SimulatedPlant: input dimension mismatch");
  state_ = sys_.A * state_ + sys_.B * u;
  return state_;
}

ReplayPlant::ReplayPlant(Dataset recording) : recording_(std::move(recording)) {}

Eigen::VectorXd ReplayPlant::initial_state() {
  if (initial_read_)
    throw std::logic_error("ReplayPlant: initial state was already read");
  initial_read_ = true;
  return recording_.states().front();
}

Eigen::VectorXd ReplayPlant::step(const Eigen::VectorXd& u) {
  if (t_ >= recording_.T())
    throw std::runtime_error("ReplayPlant: recording exhausted at t = " +
                             std::to_string(t_));
  const Eigen::VectorXd& recorded = recording_.inputs()[t_];
  if ((u - recorded).norm() > 1e-12 * (1.0 + recorded.norm()))
    throw std::runtime_error("ReplayPlant: requested input diverges from the recording at t = " +
                             std::to_string(t_));
  ++t_;
  return recording_.states()[t_];
}

InputPolicy InputPolicy::deterministic() {
  InputPolicy policy;
  policy.initial = [](int m) { return Eigen::VectorXd::Unit(m, 0).eval(); };
  policy.arbitrary = [](int m, int) { return Eigen::VectorXd::Zero(m).eval(); };
  return policy;
}

InputPolicy InputPolicy::seeded(std::uint64_t seed) {
  InputPolicy policy;
  policy.initial = [seed](int m) {
    Rng rng(split_seed(seed, 0));
    Eigen::VectorXd u = rng.normal_vector(m);
    while (u.norm() == 0.0) u = rng.normal_vector(m);
    return u;
  };
  policy.arbitrary = [seed](int m, int t) {
    Rng rng(split_seed(seed, static_cast<std::uint64_t>(t)));
    return rng.normal_vector(m).eval();
  };
  return policy;
}

std::string to_string(StepBranch branch) {
  switch (branch) {
    case StepBranch::NewDirection: return "new_direction";
    case StepBranch::KernelSteered: return "kernel_steered";
    case StepBranch::Terminated: return "terminated";
  }
  return "unknown";
}

OnlineRun run_online_design(PlantOracle& plant, const InputPolicy& policy,
                            int max_steps) {
  if (max_steps < 1)
    throw std::invalid_argument("run_online_design: max_steps must be positive");
  const int n = plant.state_dim();
  const int m = plant.input_dim();

  std::vector<Eigen::VectorXd> states{plant.initial_state()};
  std::vector<Eigen::VectorXd> inputs;
  std::vector<StepRecord> trace;

  Eigen::VectorXd u = policy.initial(m);
  if (u.size() != m || u.norm() == 0.0)
    throw std::invalid_argument("run_online_design: the opening input must be nonzero");
  trace.push_back({0, StepBranch::NewDirection, u, std::nullopt, std::nullopt});

  for (int t = 1; t <= max_steps; ++t) {
    inputs.push_back(u);
    states.push_back(plant.step(u));
    const Eigen::VectorXd& x_t = states.back();

    Eigen::MatrixXd X(n, t);
    Eigen::MatrixXd XU(n + m, t);
    for (int j = 0; j < t; ++j) {
      X.col(j) = states[j];
      XU.col(j).head(n) = states[j];
      XU.col(j).tail(m) = inputs[j];
    }

    const Subspace im_x = trajectory_image(X);
    if (im_x.residual(x_t) > membership_tol(x_t)) {
      u = policy.arbitrary(m, t);
      if (u.size() != m)
        throw std::invalid_argument("run_online_design: policy returned a wrong-sized input");
      trace.push_back({t, StepBranch::NewDirection, u, std::nullopt, std::nullopt});
      continue;
    }

    const int rank_x = im_x.dim();
    const int rank_xu = trajectory_rank(XU).rank;
    if (rank_xu == rank_x + m) {
      trace.push_back({t, StepBranch::Terminated, std::nullopt, std::nullopt, std::nullopt});
      OnlineRun run{Dataset(std::move(inputs), std::move(states)), t,
                    std::move(trace), true, true};
      return run;
    }

    // A kernel direction with nonzero input component exists exactly when the
    // product condition fails; steer along the best-conditioned one.
    const std::vector<Eigen::VectorXd> kernel = left_kernel_basis(XU);
    int best = -1;
    double best_eta = 0.0;
    for (std::size_t i = 0; i < kernel.size(); ++i) {
      const double eta_norm = kernel[i].tail(m).norm();
      if (eta_norm > best_eta) {
        best_eta = eta_norm;
        best = static_cast<int>(i);
      }
    }
    if (best < 0)
      throw std::runtime_error(
          "run_online_design: no steering direction found; tolerance failure");
    const Eigen::VectorXd xi = kernel[best].head(n);
    const Eigen::VectorXd eta = kernel[best].tail(m);
    const double tol = membership_tol(x_t);
    double c = 1.0;
    if (std::abs(xi.dot(x_t) + eta.squaredNorm()) <= tol) c = 2.0;
    u = c * eta;
    trace.push_back({t, StepBranch::KernelSteered, u, xi, eta});
  }
  throw std::runtime_error(
      "run_online_design: no termination within " + std::to_string(max_steps) +
      " steps; tolerance failure, since termination is otherwise guaranteed");
}

OnlineRun run_online_design(PlantOracle& plant, const InputPolicy& policy) {
  return run_online_design(plant, policy,
                           plant.state_dim() + plant.input_dim() + 2);
}

int predicted_length(const LtiSystem& sys, const Eigen::VectorXd& x0) {
  if (x0.size() != sys.n())
    throw std::invalid_argument("predicted_length: initial state dimension mismatch");
  Eigen::MatrixXd G(sys.n(), sys.m() + 1);
  G.leftCols(sys.m()) = sys.B;
  G.col(sys.m()) = x0;
  return reachable_subspace(sys.A, G).dim() + sys.m();
}

ShortestLength shortest_length_for_stabilization(const LtiSystem& sys,
                                                 const Eigen::VectorXd& x0) {
  if (!is_stabilizable_pair(sys.A, sys.B))
    throw std::invalid_argument(
        "shortest_length_for_stabilization: system is not stabilizable");
  ShortestLength result;
  result.lower = std::min(sys.n(), sys.m());
  result.upper = sys.n() + sys.m();
  const int predicted = predicted_length(sys, x0);
  const bool adversarial = predicted - sys.m() < sys.n();
  if (!is_controllable_pair(sys.A, sys.B) && adversarial) result.exact = predicted;
  return result;
}

}  // namespace exdesign
