#include <doctest.h>

#include "exdesign/rng.hpp"
#include "exdesign/system.hpp"

using namespace exdesign;
using Eigen::MatrixXd;
using Eigen::Vector2d;
using Eigen::VectorXd;

namespace {

LtiSystem shift_register() {
  MatrixXd A(2, 2), B(2, 1);
  A << 0, 1, 0, 0;
  B << 0, 1;
  return LtiSystem(A, B);
}

LtiSystem split_modes() {  // one stable uncontrollable mode, one unstable controlled
  MatrixXd A(2, 2), B(2, 1);
  A << 0.5, 0, 0, 2;
  B << 0, 1;
  return LtiSystem(A, B);
}

std::vector<VectorXd> scalar_inputs(std::initializer_list<double> values) {
  std::vector<VectorXd> inputs;
  for (double v : values) {
    VectorXd u(1);
    u << v;
    inputs.push_back(u);
  }
  return inputs;
}

}  // namespace

TEST_CASE("model validation") {
  CHECK_THROWS_AS(LtiSystem(MatrixXd::Zero(2, 3), MatrixXd::Zero(2, 1)),
                  std::invalid_argument);
  CHECK_THROWS_AS(LtiSystem(MatrixXd::Zero(2, 2), MatrixXd::Zero(3, 1)),
                  std::invalid_argument);
  CHECK_THROWS_AS(LtiSystem(MatrixXd::Zero(2, 2), MatrixXd(2, 0)),
                  std::invalid_argument);
}

TEST_CASE("simulate runs the recursion") {
  MatrixXd A(1, 1), B(1, 1);
  A << 1;
  B << 1;
  const LtiSystem integrator(A, B);
  VectorXd x0(1);
  x0 << 0;
  const auto states = simulate(integrator, x0, scalar_inputs({1, 1}));
  REQUIRE(states.size() == 3);
  CHECK(states[0](0) == 0);
  CHECK(states[1](0) == 1);
  CHECK(states[2](0) == 2);

  const auto zero_run =
      simulate(split_modes(), Vector2d::Zero(), scalar_inputs({0, 0, 0}));
  for (const auto& x : zero_run) CHECK(x.norm() == 0.0);

  const auto chain = simulate(shift_register(), Vector2d::Zero(), scalar_inputs({1, 0}));
  CHECK((chain[1] - Vector2d(0, 1)).norm() == 0.0);
  CHECK((chain[2] - Vector2d(1, 0)).norm() == 0.0);

  CHECK_THROWS_AS(simulate(shift_register(), VectorXd::Zero(3), scalar_inputs({1})),
                  std::invalid_argument);
}

TEST_CASE("reachable subspace of the block controllability matrix") {
  MatrixXd A = MatrixXd::Zero(2, 2);
  A(0, 0) = 1;
  A(1, 1) = 2;
  MatrixXd G(2, 1);
  G << 1, 0;
  const Subspace invariant_line = reachable_subspace(A, G);
  CHECK(invariant_line.dim() == 1);
  CHECK(invariant_line.contains(Vector2d(1, 0)));

  CHECK(reachable_subspace(A, MatrixXd::Identity(2, 2)).dim() == 2);

  const LtiSystem chain = shift_register();
  CHECK(reachable_subspace(chain.A, chain.B).dim() == 2);
}

TEST_CASE("classification by eigenvalue rank tests") {
  CHECK(classify(shift_register()) == SystemClass::Controllable);
  CHECK(classify(split_modes()) == SystemClass::StabilizableNotControllable);

  MatrixXd A = MatrixXd::Zero(2, 2);
  A(0, 0) = 2;
  A(1, 1) = 0.5;
  CHECK(classify(LtiSystem(A, MatrixXd::Zero(2, 1))) == SystemClass::NotStabilizable);
}

TEST_CASE("random systems land in the requested class") {
  for (const SystemClass cls :
       {SystemClass::Controllable, SystemClass::StabilizableNotControllable,
        SystemClass::NotStabilizable}) {
    for (std::uint64_t seed : {1ull, 2ull, 3ull, 4ull, 5ull}) {
      const int n = cls == SystemClass::Controllable ? 1 + int(seed % 5) : 2 + int(seed % 4);
      const int m = 1 + int(seed % 3);
      const LtiSystem sys = random_system(cls, n, m, seed);
      CHECK(classify(sys) == cls);
    }
  }
}

TEST_CASE("random system generation is deterministic in the seed") {
  const LtiSystem a = random_system(SystemClass::StabilizableNotControllable, 4, 2, 99);
  const LtiSystem b = random_system(SystemClass::StabilizableNotControllable, 4, 2, 99);
  CHECK((a.A - b.A).norm() == 0.0);
  CHECK((a.B - b.B).norm() == 0.0);
}

TEST_CASE("stabilizable-not-controllable generation needs two states") {
  CHECK_THROWS_AS(random_system(SystemClass::StabilizableNotControllable, 1, 1, 7),
                  std::invalid_argument);
}

TEST_CASE("adversarial initial states") {
  CHECK_FALSE(adversarial_initial_state(shift_register(), 1).has_value());

  const LtiSystem sys = split_modes();
  const auto x0 = adversarial_initial_state(sys, 1);
  REQUIRE(x0.has_value());
  MatrixXd G(2, 2);
  G.col(0) = sys.B;
  G.col(1) = *x0;
  CHECK(reachable_subspace(sys.A, G).dim() < 2);

  // e1 does not qualify for this system: [B e1] spans the plane.
  MatrixXd G2(2, 2);
  G2.col(0) = sys.B;
  G2.col(1) = Vector2d(1, 0);
  CHECK(reachable_subspace(sys.A, G2).dim() == 2);
}

TEST_CASE("reachability grows with the initial state column") {
  Rng rng(21);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = rng.uniform_int(2, 6);
    const int m = rng.uniform_int(1, 3);
    const SystemClass cls = trial % 2 == 0
                                ? SystemClass::Controllable
                                : SystemClass::StabilizableNotControllable;
    const LtiSystem sys = random_system(cls, n, m, split_seed(21, trial));
    const VectorXd x0 = rng.normal_vector(n);
    MatrixXd G(n, m + 1);
    G.leftCols(m) = sys.B;
    G.col(m) = x0;
    const Subspace with_x0 = reachable_subspace(sys.A, G);
    CHECK(with_x0.contains(reachable_subspace(sys.A, sys.B)));
  }
}

TEST_CASE("controllability matches full reachable dimension") {
  Rng rng(22);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = rng.uniform_int(1, 6);
    const int m = rng.uniform_int(1, 3);
    SystemClass cls;
    if (n == 1) {
      cls = trial % 2 == 0 ? SystemClass::Controllable : SystemClass::NotStabilizable;
    } else {
      const SystemClass all[] = {SystemClass::Controllable,
                                 SystemClass::StabilizableNotControllable,
                                 SystemClass::NotStabilizable};
      cls = all[trial % 3];
    }
    const LtiSystem sys = random_system(cls, n, m, split_seed(22, trial));
    const bool full = reachable_subspace(sys.A, sys.B).dim() == n;
    CHECK(full == (classify(sys) == SystemClass::Controllable));
  }
}

TEST_CASE("simulation is linear in initial state and input") {
  Rng rng(23);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = rng.uniform_int(1, 5);
    const int m = rng.uniform_int(1, 3);
    const LtiSystem sys = random_system(SystemClass::Controllable, n, m, split_seed(23, trial));
    const int T = rng.uniform_int(1, 6);
    std::vector<VectorXd> u1, u2, sum;
    for (int t = 0; t < T; ++t) {
      u1.push_back(rng.normal_vector(m));
      u2.push_back(rng.normal_vector(m));
      sum.push_back(u1.back() + u2.back());
    }
    const VectorXd x1 = rng.normal_vector(n);
    const VectorXd x2 = rng.normal_vector(n);
    const auto run1 = simulate(sys, x1, u1);
    const auto run2 = simulate(sys, x2, u2);
    const auto run_sum = simulate(sys, x1 + x2, sum);
    for (std::size_t t = 0; t < run_sum.size(); ++t)
      CHECK((run_sum[t] - run1[t] - run2[t]).norm() <=
            1e-10 * (1.0 + run_sum[t].norm()));
  }
}

TEST_CASE("trajectories stay inside the extended reachable subspace") {
  Rng rng(24);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = rng.uniform_int(2, 6);
    const int m = rng.uniform_int(1, 3);
    const LtiSystem sys = random_system(
        trial % 2 == 0 ? SystemClass::Controllable
                       : SystemClass::StabilizableNotControllable,
        n, m, split_seed(24, trial));
    const VectorXd x0 = rng.normal_vector(n);
    MatrixXd G(n, m + 1);
    G.leftCols(m) = sys.B;
    G.col(m) = x0;
    const Subspace reach = reachable_subspace(sys.A, G);
    std::vector<VectorXd> inputs;
    for (int t = 0; t < n + m; ++t) inputs.push_back(rng.normal_vector(m));
    for (const auto& x : simulate(sys, x0, inputs))
      CHECK(reach.residual(x) <=
            std::max(10.0 * reach.tol(), 1e-9 * (1.0 + x.norm())));
  }
}
