#include <doctest.h>

#include <json.hpp>

#include "exdesign/io.hpp"
#include "exdesign/online.hpp"
#include "exdesign/rng.hpp"
#include "exdesign/synthesis.hpp"

using namespace exdesign;
using Eigen::MatrixXd;
using Eigen::Vector2d;
using Eigen::VectorXd;

TEST_CASE("system JSON round trip is exact") {
  MatrixXd A(2, 2), B(2, 1);
  A << 0.1, -2.25, 3.5e-7, 4.0 / 3.0;
  B << 1e100, -0.0625;
  const LtiSystem sys(A, B);
  const LtiSystem back = system_from_json(to_json(sys));
  CHECK((back.A - sys.A).norm() == 0.0);
  CHECK((back.B - sys.B).norm() == 0.0);

  const auto j = nlohmann::json::parse(to_json(sys));
  CHECK(j["n"] == 2);
  CHECK(j["m"] == 1);
  CHECK(j["A"].size() == 4);
  CHECK(j["A"][1] == -2.25);  // row-major order
}

TEST_CASE("system JSON diagnostics name the offending field") {
  CHECK_THROWS_WITH_AS(system_from_json(R"({"m":1,"A":[1],"B":[1]})"),
                       doctest::Contains("'n'"), ParseError);
  CHECK_THROWS_WITH_AS(system_from_json(R"({"n":2,"m":1,"A":[1,2,3],"B":[1,2]})"),
                       doctest::Contains("'A'"), ParseError);
  CHECK_THROWS_WITH_AS(system_from_json(R"({"n":1,"m":1,"A":["x"],"B":[1]})"),
                       doctest::Contains("'A'"), ParseError);
  CHECK_THROWS_WITH_AS(system_from_json("not json"), doctest::Contains("invalid JSON"),
                       ParseError);
}

TEST_CASE("dataset JSON round trip and diagnostics") {
  std::vector<VectorXd> inputs{VectorXd(1), VectorXd(1)};
  inputs[0] << 1;
  inputs[1] << 2;
  std::vector<VectorXd> states{Vector2d(0, 0), Vector2d(1, 0), Vector2d(2, 0)};
  const Dataset data(inputs, states);
  const Dataset back = dataset_from_json(to_json(data));
  CHECK(back.T() == 2);
  CHECK((back.X_minus() - data.X_minus()).norm() == 0.0);
  CHECK((back.U_minus() - data.U_minus()).norm() == 0.0);

  CHECK_THROWS_WITH_AS(dataset_from_json(R"({"inputs":[[1]],"states":[[0],[1]]})"),
                       doctest::Contains("'T'"), ParseError);
  CHECK_THROWS_WITH_AS(
      dataset_from_json(R"({"T":2,"inputs":[[1]],"states":[[0],[1],[2]]})"),
      doctest::Contains("'inputs'"), ParseError);
  CHECK_THROWS_WITH_AS(dataset_from_json(R"({"T":1,"inputs":[[1]],"states":[[0]]})"),
                       doctest::Contains("'states'"), ParseError);
}

TEST_CASE("CSV trajectory import") {
  const std::string csv =
      "u1,x1,x2\n"
      "1, 0, 0\n"
      "2, 1, 0\n"
      "0, 2, 0\n";
  const Dataset data = dataset_from_csv(csv, 1, 2);
  CHECK(data.T() == 2);
  CHECK(data.U_minus()(0, 1) == 2);
  CHECK(data.X_plus()(0, 1) == 2);

  // final row may carry only the state columns
  const Dataset short_tail = dataset_from_csv("1,0,0\n2,1,0\n2,0\n", 1, 2);
  CHECK(short_tail.T() == 2);
  CHECK(short_tail.states().back()(0) == 2);

  CHECK_THROWS_WITH_AS(dataset_from_csv("1,0\n", 1, 2), doctest::Contains("rows"),
                       ParseError);
  CHECK_THROWS_WITH_AS(dataset_from_csv("1,0,0\n2,1\n0,2,0\n", 1, 2),
                       doctest::Contains("row 1"), ParseError);
  CHECK_THROWS_WITH_AS(dataset_from_csv("1,0,0\nx,1,0\n0,2,0\n", 1, 2),
                       doctest::Contains("row"), ParseError);
}

TEST_CASE("input signal JSON accepts bare arrays and wrapped objects") {
  const auto input = input_from_json("[[1.0],[2.0],[3.0]]");
  REQUIRE(input.size() == 3);
  CHECK(input[1](0) == 2.0);

  const auto wrapped = input_from_json(R"({"inputs":[[1.0,0.0],[0.0,1.0]]})");
  CHECK(wrapped.size() == 2);
  CHECK(wrapped[0].size() == 2);

  const auto round = input_from_json(to_json(input));
  CHECK(round.size() == input.size());

  CHECK_THROWS_AS(input_from_json("[]"), ParseError);
}

TEST_CASE("gain certificate JSON carries the branch witness") {
  std::vector<VectorXd> inputs{VectorXd(1)};
  inputs[0] << 0;
  std::vector<VectorXd> states{VectorXd(1), VectorXd(1)};
  states[0] << 1;
  states[1] << 0.5;
  const auto cert = stabilize_fullrank(Dataset(inputs, states));
  REQUIRE(cert.has_value());
  const auto j = nlohmann::json::parse(to_json(*cert));
  CHECK(j["branch"] == "full_rank");
  CHECK(j.contains("Theta"));
  CHECK(j["closed_loop_radius_on_data"] == doctest::Approx(0.5));

  GainCertificate restricted;
  restricted.branch = GainBranch::SubspaceRestricted;
  restricted.K = MatrixXd::Zero(1, 2);
  restricted.A_r = MatrixXd::Zero(1, 1);
  restricted.B_r = MatrixXd::Ones(1, 1);
  restricted.V = MatrixXd::Identity(2, 1);
  restricted.K_r = MatrixXd::Zero(1, 1);
  const auto jr = nlohmann::json::parse(to_json(restricted));
  CHECK(jr["branch"] == "subspace_restricted");
  CHECK(jr.contains("A_r"));
  CHECK(jr.contains("V"));
  CHECK_FALSE(jr.contains("Theta"));
}

TEST_CASE("online run JSON serializes the full trace") {
  MatrixXd A(1, 1), B(1, 1);
  A << 0.5;
  B << 1;
  SimulatedPlant plant(LtiSystem(A, B), VectorXd::Zero(1));
  const OnlineRun run = run_online_design(plant, InputPolicy::deterministic());
  const auto j = nlohmann::json::parse(to_json(run));
  CHECK(j["T"] == 2);
  REQUIRE(j["trace"].size() == 3);
  CHECK(j["trace"][0]["branch"] == "new_direction");
  CHECK(j["trace"][2]["branch"] == "terminated");
  CHECK(j["exit"]["image_product_condition"] == true);
  CHECK(j["dataset"]["T"] == 2);
}

TEST_CASE("campaign spec JSON round trip") {
  CampaignSpec spec;
  spec.name = "smoke";
  spec.theorem = "thm4-equivalence";
  spec.trials = 7;
  spec.n_range = {2, 4};
  spec.m_range = {1, 2};
  spec.seed = 99;
  const CampaignSpec back = campaign_spec_from_json(to_json(spec));
  CHECK(back.name == spec.name);
  CHECK(back.theorem == spec.theorem);
  CHECK(back.trials == 7);
  CHECK(back.n_range.lo == 2);
  CHECK(back.n_range.hi == 4);
  CHECK(back.seed == 99);
  CHECK_FALSE(back.trial_seed_override.has_value());

  CHECK_THROWS_WITH_AS(campaign_spec_from_json(R"({"name":"x","theorem":"t","trials":0,
      "dims":{"n":[2,4],"m":[1,2]},"seed":1})"),
                       doctest::Contains("'trials'"), ParseError);
  CHECK_THROWS_WITH_AS(campaign_spec_from_json(R"({"name":"x","theorem":"t","trials":1,
      "dims":{"n":[4,2],"m":[1,2]},"seed":1})"),
                       doctest::Contains("dims.n"), ParseError);
}

TEST_CASE("vector JSON") {
  VectorXd v(3);
  v << 1.5, -2, 0.25;
  const VectorXd back = vector_from_json(to_json(v));
  CHECK((back - v).norm() == 0.0);
  CHECK_THROWS_AS(vector_from_json(R"({"x":1})"), ParseError);
}

TEST_CASE("verdict JSON records conditions and diagnostics") {
  std::vector<VectorXd> inputs{VectorXd(1), VectorXd(1)};
  inputs[0] << 1;
  inputs[1] << 1;
  std::vector<VectorXd> states{VectorXd(1), VectorXd(1), VectorXd(1)};
  states[0] << 0;
  states[1] << 1;
  states[2] << 2;
  const Verdict verdict =
      informative_for_identification(Dataset(inputs, states), PriorKnowledge::All);
  const auto j = nlohmann::json::parse(to_json(verdict));
  CHECK(j["informative"] == true);
  CHECK(j["conditions"]["XU_full_row_rank"] == true);
  CHECK(j["rank_XU"]["rank"] == 2);
  CHECK(j["rank_XU"]["singular_values"].size() == 2);
  CHECK(j.contains("identified"));
}
