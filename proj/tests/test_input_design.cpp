#include <doctest.h>

#include "exdesign/input_design.hpp"
#include "exdesign/rng.hpp"

using namespace exdesign;
using Eigen::VectorXd;

namespace {

std::vector<VectorXd> scalar_signal(std::initializer_list<double> values) {
  std::vector<VectorXd> signal;
  for (double v : values) {
    VectorXd u(1);
    u << v;
    signal.push_back(u);
  }
  return signal;
}

}  // namespace

TEST_CASE("excitation order of hand signals") {
  // [0,1,0]: depth 2 Hankel has rank 2; depth 3 is a single column of 3 rows.
  CHECK(pe_order(scalar_signal({0, 1, 0})) == 2);
  CHECK(pe_order(scalar_signal({1, 1, 1})) == 1);
  CHECK(pe_order(scalar_signal({0, 0, 0, 0})) == 0);
  CHECK_THROWS_AS(pe_order({}), std::invalid_argument);
}

TEST_CASE("generated inputs reach the requested order at minimal length") {
  const auto short_one = generate_pe_input(1, 2, std::nullopt, 1);
  CHECK(short_one.size() == 3);  // 2*(1+1) - 1
  CHECK(pe_order(short_one) >= 2);

  const auto wide = generate_pe_input(2, 3, std::nullopt, 2);
  CHECK(wide.size() == 8);  // 3*(2+1) - 1

  CHECK_THROWS_AS(generate_pe_input(1, 2, 2, 3), std::invalid_argument);

  Rng rng(61);
  for (int trial = 0; trial < 40; ++trial) {
    const int m = rng.uniform_int(1, 3);
    const int order = rng.uniform_int(1, 6);
    const int extra = rng.uniform_int(0, 5);
    const auto input =
        generate_pe_input(m, order, order * (m + 1) - 1 + extra, split_seed(61, trial));
    CHECK(pe_order(input) >= order);
  }
}

TEST_CASE("generation is deterministic in the seed") {
  const auto a = generate_pe_input(2, 3, std::nullopt, 77);
  const auto b = generate_pe_input(2, 3, std::nullopt, 77);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK((a[i] - b[i]).norm() == 0.0);
}

TEST_CASE("universality table for identification") {
  const int n = 3;
  const auto pe = generate_pe_input(1, n + 1, std::nullopt, 5);
  const auto verdict =
      universality_verdict(pe, n, DesignGoal::Identification, PriorKnowledge::Controllable);
  CHECK(verdict.universal == Universality::Universal);
  CHECK(verdict.pe_order_required == n + 1);
  CHECK(verdict.pe_order_found >= n + 1);
  CHECK(verdict.hankel_rank_report.rank == n + 1);

  for (const auto pk : {PriorKnowledge::All, PriorKnowledge::Stabilizable}) {
    CHECK(universality_verdict(pe, n, DesignGoal::Identification, pk).universal ==
          Universality::Impossible);
  }

  const auto constant = scalar_signal({1, 1, 1, 1, 1});
  CHECK(universality_verdict(constant, n, DesignGoal::Identification,
                             PriorKnowledge::Controllable)
            .universal == Universality::NotUniversal);
}

TEST_CASE("universality table for stabilization") {
  const int n = 2;
  const auto pe = generate_pe_input(1, n + 1, std::nullopt, 6);
  for (const auto pk : {PriorKnowledge::Stabilizable, PriorKnowledge::Controllable}) {
    CHECK(universality_verdict(pe, n, DesignGoal::Stabilization, pk).universal ==
          Universality::Universal);
    const auto constant = scalar_signal({1, 1, 1});
    CHECK(universality_verdict(constant, n, DesignGoal::Stabilization, pk).universal ==
          Universality::NotUniversal);
  }
  CHECK(universality_verdict(pe, n, DesignGoal::Stabilization, PriorKnowledge::All)
            .universal == Universality::Impossible);
}

TEST_CASE("constant signals are only exciting at order one") {
  // n = 1 already demands order 2, which a constant signal cannot reach.
  const auto constant = scalar_signal({1, 1, 1});
  CHECK(pe_order(constant) == 1);
  CHECK(universality_verdict(constant, 1, DesignGoal::Stabilization,
                             PriorKnowledge::Stabilizable)
            .universal == Universality::NotUniversal);
}
