#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "exdesign/informativity.hpp"
#include "exdesign/system.hpp"

namespace exdesign {

/// One step of an unknown plant: apply u(t), observe x(t+1). The initial
/// state is readable exactly once, at the start of a run.
class PlantOracle {
 public:
  virtual ~PlantOracle() = default;
  virtual int state_dim() const = 0;
  virtual int input_dim() const = 0;
  virtual Eigen::VectorXd initial_state() = 0;
  virtual Eigen::VectorXd step(const Eigen::VectorXd& u) = 0;
};

/// In-process plant backed by an explicit model.
class SimulatedPlant final : public PlantOracle {
 public:
  SimulatedPlant(LtiSystem sys, Eigen::VectorXd x0);
  int state_dim() const override { return sys_.n(); }
  int input_dim() const override { return sys_.m(); }
  Eigen::VectorXd initial_state() override;
  Eigen::VectorXd step(const Eigen::VectorXd& u) override;

 private:
  LtiSystem sys_;
  Eigen::VectorXd state_;
  bool initial_read_ = false;
};

/// Plant replayed from a recorded trajectory; throws when the requested
/// inputs diverge from the recording or the recording runs out.
class ReplayPlant final : public PlantOracle {
 public:
  explicit ReplayPlant(Dataset recording);
  int state_dim() const override { return recording_.n(); }
  int input_dim() const override { return recording_.m(); }
  Eigen::VectorXd initial_state() override;
  Eigen::VectorXd step(const Eigen::VectorXd& u) override;

 private:
  Dataset recording_;
  int t_ = 0;
  bool initial_read_ = false;
};

/// Input choices left free by the online design: the nonzero opening input
/// and the unconstrained input taken whenever the latest state leaves the
/// span of the recorded ones.
struct InputPolicy {
  std::function<Eigen::VectorXd(int)> initial;         // m -> u(0), nonzero
  std::function<Eigen::VectorXd(int, int)> arbitrary;  // (m, t) -> u(t)

  /// u(0) = e1, arbitrary inputs zero; fully reproducible traces.
  static InputPolicy deterministic();
  /// Gaussian draws for both choices.
  static InputPolicy seeded(std::uint64_t seed);
};

enum class StepBranch { NewDirection, KernelSteered, Terminated };

std::string to_string(StepBranch branch);

struct StepRecord {
  int t = 0;
  StepBranch branch = StepBranch::NewDirection;
  std::optional<Eigen::VectorXd> input;  // u(t); absent on the termination record
  std::optional<Eigen::VectorXd> xi;     // active steering pair, when used
  std::optional<Eigen::VectorXd> eta;
};

struct OnlineRun {
  Dataset dataset;
  int length = 0;                 // T
  std::vector<StepRecord> trace;  // T input records plus the termination record
  bool exit_state_in_image = false;     // x(T) in im X-
  bool exit_product_condition = false;  // rank [X-; U-] = rank X- + m
};

/// Runs the adaptive experiment: one plant step per iteration, steering the
/// input to grow rank [X; U] until im [X; U] = im X x R^m with the latest
/// state inside im X. Throws if the safety bound max_steps is hit, which can
/// only happen through a tolerance failure.
OnlineRun run_online_design(PlantOracle& plant, const InputPolicy& policy,
                            int max_steps);

/// Same with the default bound max_steps = n + m + 2.
OnlineRun run_online_design(PlantOracle& plant,
                            const InputPolicy& policy = InputPolicy::deterministic());

/// Length the online design terminates at: dim R(A, [B x0]) + m.
int predicted_length(const LtiSystem& sys, const Eigen::VectorXd& x0);

/// Shortest dataset length from x0 that supports gain synthesis under
/// stabilizability prior knowledge. Exact when the system is uncontrollable
/// and x0 keeps R(A, [B x0]) proper; otherwise only the bracket
/// [min(n, m), n + m] is known.
struct ShortestLength {
  std::optional<int> exact;
  int lower = 0;
  int upper = 0;
};
ShortestLength shortest_length_for_stabilization(const LtiSystem& sys,
                                                 const Eigen::VectorXd& x0);

}  // namespace exdesign
