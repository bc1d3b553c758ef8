#include <doctest.h>

#include <regex>

#include "exdesign/campaign.hpp"
#include "exdesign/io.hpp"
#include "exdesign/rng.hpp"

using namespace exdesign;

TEST_CASE("the registry covers every audited result") {
  const std::vector<std::string> expected = {
      "thm4-equivalence",  "cor5-openness",        "lemma6-pe-rank",
      "thm8-forward",      "thm9-impossibility",   "cor10-largest-id",
      "cor11-no-universal-id", "prop12-fullrank",  "prop13-dispatch",
      "lemma14-equivalence",   "thm15-forward",    "cor16-largest-stab",
      "lemma17-length",    "thm18-shortest"};
  for (const auto& id : expected) {
    CHECK(is_registered_theorem(id));
    CHECK_FALSE(theorem_description(id).empty());
  }
  CHECK(registered_theorems().size() == expected.size());
  CHECK_FALSE(is_registered_theorem("thm0-unknown"));
  CHECK_THROWS_AS(theorem_description("thm0-unknown"), std::invalid_argument);

  CampaignSpec bogus;
  bogus.theorem = "thm0-unknown";
  CHECK_THROWS_AS(run_campaign(bogus), std::invalid_argument);
}

TEST_CASE("identical spec and seed give byte-identical reports modulo wall time") {
  CampaignSpec spec;
  spec.name = "repro";
  spec.theorem = "lemma6-pe-rank";
  spec.trials = 20;
  spec.seed = 5;

  CampaignReport a = run_campaign(spec);
  CampaignReport b = run_campaign(spec);
  a.wall_time_ms = 0.0;
  b.wall_time_ms = 0.0;
  CHECK(to_json(a) == to_json(b));
  CHECK(a.pass_count == 20);
  CHECK(a.pass_count + a.fail_count == spec.trials);
}

TEST_CASE("per-trial seeds derive from the campaign seed") {
  CampaignSpec spec;
  spec.name = "seeds";
  spec.theorem = "thm4-equivalence";
  spec.trials = 5;
  spec.seed = 123;
  const CampaignReport report = run_campaign(spec);
  REQUIRE(report.trials.size() == 5);
  for (int i = 0; i < 5; ++i)
    CHECK(report.trials[i].seed == split_seed(123, static_cast<std::uint64_t>(i)));
}

TEST_CASE("the trial seed override pins trial zero") {
  CampaignSpec spec;
  spec.name = "override";
  spec.theorem = "thm4-equivalence";
  spec.trials = 1;
  spec.seed = 7;
  spec.trial_seed_override = 424242;
  const CampaignReport report = run_campaign(spec);
  CHECK(report.trials[0].seed == 424242);
}

TEST_CASE("a recorded trial replays to the same outcome") {
  CampaignSpec spec;
  spec.name = "replay";
  spec.theorem = "prop13-dispatch";
  spec.trials = 30;
  spec.seed = 2024;
  const CampaignReport original = run_campaign(spec);

  for (int i : {0, 7, 29}) {
    const TrialRecord& trial = original.trials[i];
    CampaignSpec replay;
    replay.name = "replay-one";
    replay.theorem = spec.theorem;
    replay.trials = 1;
    replay.seed = spec.seed;
    replay.trial_seed_override = trial.seed;
    replay.n_range = {trial.n, trial.n};
    replay.m_range = {trial.m, trial.m};
    const CampaignReport rerun = run_campaign(replay);
    CHECK(rerun.trials[0].pass == trial.pass);
    CHECK(rerun.trials[0].n == trial.n);
    CHECK(rerun.trials[0].m == trial.m);
    CHECK(rerun.trials[0].system_class == trial.system_class);
  }
}

TEST_CASE("reproduction command pins seed and dimensions") {
  CampaignSpec spec;
  spec.theorem = "thm8-forward";
  TrialRecord trial;
  trial.seed = 42;
  trial.n = 3;
  trial.m = 2;
  const std::string cmd = reproduction_command(spec, trial);
  CHECK(cmd.find("--theorem thm8-forward") != std::string::npos);
  CHECK(cmd.find("--trial-seed 42") != std::string::npos);
  CHECK(cmd.find("--n-min 3") != std::string::npos);
  CHECK(cmd.find("--n-max 3") != std::string::npos);
  CHECK(cmd.find("--m-min 2") != std::string::npos);
  CHECK(std::regex_search(cmd, std::regex("^exdesign campaign ")));
}

TEST_CASE("small sweeps of every registered campaign pass") {
  for (const auto& id : registered_theorems()) {
    CampaignSpec spec;
    spec.name = "sweep";
    spec.theorem = id;
    spec.trials = 10;
    spec.seed = 31;
    const CampaignReport report = run_campaign(spec);
    INFO("campaign ", id);
    CHECK(report.fail_count == 0);
  }
}
