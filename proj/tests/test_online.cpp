#include <doctest.h>

#include "exdesign/informativity.hpp"
#include "exdesign/online.hpp"
#include "exdesign/rng.hpp"
#include "exdesign/synthesis.hpp"
#include "exdesign/system.hpp"

using namespace exdesign;
using Eigen::MatrixXd;
using Eigen::Vector2d;
using Eigen::VectorXd;

namespace {

LtiSystem scalar_plant(double a, double b) {
  MatrixXd A(1, 1), B(1, 1);
  A << a;
  B << b;
  return LtiSystem(A, B);
}

LtiSystem split_modes() {
  MatrixXd A(2, 2), B(2, 1);
  A << 0.5, 0, 0, 2;
  B << 0, 1;
  return LtiSystem(A, B);
}

}  // namespace

TEST_CASE("scalar run follows the documented trace") {
  SimulatedPlant plant(scalar_plant(0.5, 1.0), VectorXd::Zero(1));
  const OnlineRun run = run_online_design(plant, InputPolicy::deterministic());

  CHECK(run.length == 2);
  REQUIRE(run.trace.size() == 3);
  CHECK(run.trace[0].branch == StepBranch::NewDirection);
  CHECK((*run.trace[0].input)(0) == 1.0);
  CHECK(run.trace[1].branch == StepBranch::NewDirection);  // x(1)=1 leaves {0}
  CHECK((*run.trace[1].input)(0) == 0.0);
  CHECK(run.trace[2].branch == StepBranch::Terminated);
  CHECK_FALSE(run.trace[2].input.has_value());

  CHECK(run.dataset.T() == 2);
  CHECK(run.dataset.states()[0](0) == 0.0);
  CHECK(run.dataset.states()[1](0) == 1.0);
  CHECK(run.dataset.states()[2](0) == doctest::Approx(0.5));
  CHECK(run.exit_product_condition);
  CHECK(run.exit_state_in_image);
}

TEST_CASE("controllable plants terminate at n plus m") {
  Rng rng(71);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = rng.uniform_int(1, 5);
    const int m = rng.uniform_int(1, 3);
    const LtiSystem sys =
        random_system(SystemClass::Controllable, n, m, split_seed(71, trial));
    const VectorXd x0 = rng.normal_vector(n);
    SimulatedPlant plant(sys, x0);
    const OnlineRun run = run_online_design(plant, InputPolicy::seeded(split_seed(72, trial)));
    CHECK(run.length == n + m);
    CHECK(run.length == predicted_length(sys, x0));
    const Verdict verdict =
        informative_for_identification(run.dataset, PriorKnowledge::Controllable);
    CHECK(verdict.informative);
    const LtiSystem estimate = identify(run.dataset);
    CHECK(std::sqrt((estimate.A - sys.A).squaredNorm() +
                    (estimate.B - sys.B).squaredNorm()) <= 1e-8);
  }
}

TEST_CASE("kernel steering fires and satisfies its certificate") {
  // A plant with no input authority: states never leave {0}, so the run must
  // steer along kernel directions to certify the input block.
  MatrixXd A(1, 1), B(1, 2);
  A << 0.5;
  B << 0, 0;
  SimulatedPlant plant(LtiSystem(A, B), VectorXd::Zero(1));
  const OnlineRun run = run_online_design(plant, InputPolicy::deterministic());
  CHECK(run.length == 2);  // dim R(A,[B x0]) + m = 0 + 2

  bool steered = false;
  const MatrixXd XU = run.dataset.XU_minus();
  for (const auto& record : run.trace) {
    if (record.branch != StepBranch::KernelSteered) continue;
    steered = true;
    REQUIRE(record.xi.has_value());
    REQUIRE(record.eta.has_value());
    const int t = record.t;
    const MatrixXd X_head = run.dataset.X_minus().leftCols(t);
    const MatrixXd U_head = run.dataset.U_minus().leftCols(t);
    const double kernel_residual =
        (record.xi->transpose() * X_head + record.eta->transpose() * U_head).norm();
    CHECK(kernel_residual <= 1e-9);
    const double steering = std::abs(record.xi->dot(run.dataset.states()[t]) +
                                     record.eta->dot(*record.input));
    CHECK(steering > 1e-9);
  }
  CHECK(steered);
}

TEST_CASE("uncontrollable plants with adversarial starts finish early") {
  const LtiSystem sys = split_modes();
  const auto x0 = adversarial_initial_state(sys, 3);
  REQUIRE(x0.has_value());
  SimulatedPlant plant(sys, *x0);
  const OnlineRun run = run_online_design(plant, InputPolicy::deterministic());
  CHECK(run.length == 2);  // dim span{e2} + 1
  CHECK(run.length < sys.n() + sys.m());
  CHECK(informative_for_stabilization(run.dataset, PriorKnowledge::Stabilizable).informative);
}

TEST_CASE("predicted length from the extended reachable subspace") {
  const LtiSystem chain = random_system(SystemClass::Controllable, 3, 2, 9);
  Rng rng(73);
  CHECK(predicted_length(chain, rng.normal_vector(3)) == 5);

  MatrixXd A = MatrixXd::Zero(2, 2);
  A(0, 0) = 0.5;
  A(1, 1) = 2;
  MatrixXd B(2, 1);
  B << 0, 1;
  const LtiSystem sys(A, B);
  CHECK(predicted_length(sys, Vector2d::Zero()) == 2);
  CHECK(predicted_length(sys, Vector2d(1, 0)) == 3);
}

TEST_CASE("shortest stabilization length") {
  const LtiSystem sys = split_modes();
  const ShortestLength exact = shortest_length_for_stabilization(sys, Vector2d::Zero());
  REQUIRE(exact.exact.has_value());
  CHECK(*exact.exact == 2);

  const LtiSystem chain = random_system(SystemClass::Controllable, 2, 1, 11);
  Rng rng(74);
  const ShortestLength bracket =
      shortest_length_for_stabilization(chain, rng.normal_vector(2));
  CHECK_FALSE(bracket.exact.has_value());
  CHECK(bracket.lower == 1);
  CHECK(bracket.upper == 3);

  MatrixXd A = MatrixXd::Zero(2, 2);
  A(0, 0) = 2;
  A(1, 1) = 0.5;
  CHECK_THROWS_AS(
      shortest_length_for_stabilization(LtiSystem(A, MatrixXd::Zero(2, 1)), Vector2d::Zero()),
      std::invalid_argument);
}

TEST_CASE("plant oracles enforce the single initial-state read") {
  SimulatedPlant plant(scalar_plant(0.5, 1.0), VectorXd::Zero(1));
  (void)plant.initial_state();
  CHECK_THROWS_AS(plant.initial_state(), std::logic_error);

  CHECK_THROWS_AS(SimulatedPlant(scalar_plant(0.5, 1.0), VectorXd::Zero(2)),
                  std::invalid_argument);
}

TEST_CASE("replay oracle reproduces a recorded run and rejects divergence") {
  SimulatedPlant plant(split_modes(), Vector2d(0, 1));
  const OnlineRun original = run_online_design(plant, InputPolicy::deterministic());

  ReplayPlant replay(original.dataset);
  const OnlineRun replayed = run_online_design(replay, InputPolicy::deterministic());
  CHECK(replayed.length == original.length);
  for (int t = 0; t <= original.length; ++t)
    CHECK((replayed.dataset.states()[t] - original.dataset.states()[t]).norm() == 0.0);

  ReplayPlant fresh(original.dataset);
  (void)fresh.initial_state();
  VectorXd wrong = *original.trace[0].input;
  wrong(0) += 1.0;
  CHECK_THROWS_AS(fresh.step(wrong), std::runtime_error);

  ReplayPlant exhausted(original.dataset);
  (void)exhausted.initial_state();
  for (int t = 0; t < original.length; ++t)
    (void)exhausted.step(*original.trace[t].input);
  CHECK_THROWS_AS(exhausted.step(*original.trace[0].input), std::runtime_error);
}

TEST_CASE("safety bound and defective policies are rejected") {
  SimulatedPlant starved(random_system(SystemClass::Controllable, 3, 1, 13),
                         VectorXd::Zero(3));
  CHECK_THROWS_AS(run_online_design(starved, InputPolicy::deterministic(), 1),
                  std::runtime_error);

  InputPolicy zero_start = InputPolicy::deterministic();
  zero_start.initial = [](int m) { return VectorXd::Zero(m).eval(); };
  SimulatedPlant plant(scalar_plant(0.5, 1.0), VectorXd::Zero(1));
  CHECK_THROWS_AS(run_online_design(plant, zero_start), std::invalid_argument);
}

TEST_CASE("rank grows by one every step across random runs") {
  Rng rng(75);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = rng.uniform_int(2, 6);
    const int m = rng.uniform_int(1, 3);
    const SystemClass cls = trial % 2 == 0
                                ? SystemClass::Controllable
                                : SystemClass::StabilizableNotControllable;
    const LtiSystem sys = random_system(cls, n, m, split_seed(75, trial));
    VectorXd x0;
    const auto adversarial = adversarial_initial_state(sys, split_seed(76, trial));
    if (adversarial && trial % 4 == 1) {
      x0 = *adversarial;
    } else {
      Rng local(split_seed(77, trial));
      x0 = local.normal_vector(n);
    }
    SimulatedPlant plant(sys, x0);
    const OnlineRun run = run_online_design(plant, InputPolicy::seeded(split_seed(78, trial)));
    CHECK(run.length == predicted_length(sys, x0));
    const MatrixXd XU = run.dataset.XU_minus();
    for (int t = 0; t < run.length; ++t)
      CHECK(trajectory_rank(MatrixXd(XU.leftCols(t + 1))).rank == t + 1);
    CHECK(run.exit_product_condition);
    CHECK(run.exit_state_in_image);
  }
}
