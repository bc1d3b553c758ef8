#include "exdesign/campaign.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

#include "exdesign/informativity.hpp"
#include "exdesign/input_design.hpp"
#include "exdesign/online.hpp"
#include "exdesign/rng.hpp"
#include "exdesign/synthesis.hpp"
#include "exdesign/system.hpp"

namespace exdesign {

namespace {

struct TrialContext {
  std::uint64_t trial_seed;
  int index;
  Rng rng;
  DimRange n_range;
  DimRange m_range;
  int n = 0;
  int m = 0;
  std::uint64_t stream = 0;

  TrialContext(std::uint64_t seed, int idx, DimRange nr, DimRange mr)
      : trial_seed(seed), index(idx), rng(seed), n_range(nr), m_range(mr) {}

  // Dimension draws always consume exactly one engine call each, so a replay
  // with pinned ranges reproduces the downstream stream.
  void draw_dims(int min_n = 1) {
    n = std::max(min_n, rng.uniform_int(n_range.lo, n_range.hi));
    m = rng.uniform_int(m_range.lo, m_range.hi);
  }

  std::uint64_t next_seed() { return split_seed(trial_seed, 1000 + stream++); }
};

struct TrialOutcome {
  bool pass = true;
  std::string detail;
  std::string system_class;
};

using TrialProcedure = std::function<TrialOutcome(TrialContext&)>;

void check(TrialOutcome& outcome, bool condition, const std::string& label) {
  if (!condition && outcome.pass) {
    outcome.pass = false;
    outcome.detail = "failed: " + label;
  }
}

std::vector<Eigen::VectorXd> random_input(TrialContext& ctx, int length) {
  Rng rng(ctx.next_seed());
  std::vector<Eigen::VectorXd> input;
  input.reserve(length);
  for (int t = 0; t < length; ++t) input.push_back(rng.normal_vector(ctx.m));
  return input;
}

std::vector<Eigen::VectorXd> zero_input(int m, int length) {
  return std::vector<Eigen::VectorXd>(length, Eigen::VectorXd::Zero(m));
}

SystemClass pick_class(TrialContext& ctx,
                       const std::vector<SystemClass>& choices) {
  return choices[static_cast<std::size_t>(
      ctx.rng.uniform_int(0, static_cast<int>(choices.size()) - 1))];
}

LtiSystem draw_system(TrialContext& ctx, SystemClass cls) {
  return random_system(cls, ctx.n, ctx.m, ctx.next_seed());
}

double identification_error(const Dataset& data, const LtiSystem& truth) {
  const LtiSystem estimate = identify(data);
  return std::sqrt((estimate.A - truth.A).squaredNorm() +
                   (estimate.B - truth.B).squaredNorm());
}

// --- trial procedures -------------------------------------------------------

// Identification verdicts agree across all priors and reduce to the rank test
// and to the consistent set being a singleton.
TrialOutcome trial_identification_equivalence(TrialContext& ctx) {
  TrialOutcome outcome;
  ctx.draw_dims(2);
  const SystemClass cls = pick_class(
      ctx, {SystemClass::Controllable, SystemClass::StabilizableNotControllable,
            SystemClass::NotStabilizable});
  const LtiSystem sys = draw_system(ctx, cls);
  outcome.system_class = to_string(cls);

  Rng x0_rng(ctx.next_seed());
  const Eigen::VectorXd x0 = x0_rng.normal_vector(ctx.n);
  const int length = ctx.rng.uniform_int(1, ctx.n + ctx.m + 2);
  const bool degenerate = ctx.rng.bernoulli(0.1);
  const Dataset data = collect_dataset(
      sys, x0, degenerate ? zero_input(ctx.m, length) : random_input(ctx, length));

  const Verdict all = informative_for_identification(data, PriorKnowledge::All);
  const Verdict cont = informative_for_identification(data, PriorKnowledge::Controllable);
  const Verdict stab = informative_for_identification(data, PriorKnowledge::Stabilizable);
  check(outcome, all.informative == cont.informative && all.informative == stab.informative,
        "verdict differs across priors");
  check(outcome, all.informative == (all.xu_rank.rank == ctx.n + ctx.m),
        "verdict is not the rank test");
  check(outcome, all.informative == consistent_set(data).singleton(),
        "verdict is not the singleton test");
  if (outcome.pass)
    outcome.detail = all.informative ? "informative" : "not informative";
  return outcome;
}

// Controllable truth + persistently exciting input of order n+1 gives a
// full-row-rank data block.
TrialOutcome trial_pe_rank(TrialContext& ctx) {
  TrialOutcome outcome;
  ctx.draw_dims();
  const LtiSystem sys = draw_system(ctx, SystemClass::Controllable);
  outcome.system_class = to_string(SystemClass::Controllable);
  Rng x0_rng(ctx.next_seed());
  const Eigen::VectorXd x0 = x0_rng.normal_vector(ctx.n);
  const auto input = generate_pe_input(ctx.m, ctx.n + 1, std::nullopt, ctx.next_seed());
  const Dataset data = collect_dataset(sys, x0, input);
  check(outcome, trajectory_rank(data.XU_minus()).rank == ctx.n + ctx.m,
        "[X-; U-] not full row rank");
  return outcome;
}

// ... and the data identifies the truth.
TrialOutcome trial_offline_identification(TrialContext& ctx) {
  TrialOutcome outcome;
  ctx.draw_dims();
  const LtiSystem sys = draw_system(ctx, SystemClass::Controllable);
  outcome.system_class = to_string(SystemClass::Controllable);
  Rng x0_rng(ctx.next_seed());
  const Eigen::VectorXd x0 = x0_rng.normal_vector(ctx.n);
  const auto input = generate_pe_input(ctx.m, ctx.n + 1, std::nullopt, ctx.next_seed());
  const Dataset data = collect_dataset(sys, x0, input);

  check(outcome, trajectory_rank(data.XU_minus()).rank == ctx.n + ctx.m,
        "[X-; U-] not full row rank");
  check(outcome,
        informative_for_identification(data, PriorKnowledge::Controllable).informative,
        "not informative for identification");
  if (!outcome.pass) return outcome;
  const double error = identification_error(data, sys);
  check(outcome, error <= 1e-8, "identification error above 1e-8");
  std::ostringstream detail;
  detail << "error " << error;
  outcome.detail = detail.str();
  return outcome;
}

// Uncontrollable truth started at an adversarial state can never produce
// identification-informative data, whatever the input.
TrialOutcome trial_identification_impossible(TrialContext& ctx) {
  TrialOutcome outcome;
  ctx.draw_dims(2);
  const SystemClass cls =
      pick_class(ctx, {SystemClass::StabilizableNotControllable,
                       SystemClass::NotStabilizable});
  const LtiSystem sys = draw_system(ctx, cls);
  outcome.system_class = to_string(cls);
  const auto x0 = adversarial_initial_state(sys, ctx.next_seed());
  check(outcome, x0.has_value(), "no adversarial state for an uncontrollable system");
  if (!outcome.pass) return outcome;

  const int length = ctx.rng.uniform_int(1, ctx.n + ctx.m + 3);
  const Dataset data = collect_dataset(sys, *x0, random_input(ctx, length));
  check(outcome, trajectory_rank(data.X_minus()).rank < ctx.n, "X- reached full row rank");
  check(outcome, !informative_for_identification(data, PriorKnowledge::All).informative,
        "data became informative for identification");
  return outcome;
}

// Universality table for identification: only controllability prior knowledge
// admits universal inputs, and then exactly the persistently exciting ones.
TrialOutcome trial_universal_identification_table(TrialContext& ctx) {
  TrialOutcome outcome;
  ctx.draw_dims();
  const auto pe = generate_pe_input(ctx.m, ctx.n + 1, std::nullopt, ctx.next_seed());
  const auto constant = std::vector<Eigen::VectorXd>(
      ctx.n + 2, Eigen::VectorXd::Ones(ctx.m));

  const auto v_pe = universality_verdict(pe, ctx.n, DesignGoal::Identification,
                                         PriorKnowledge::Controllable);
  check(outcome, v_pe.universal == Universality::Universal,
        "persistently exciting input not universal under controllability prior");
  const auto v_const = universality_verdict(constant, ctx.n, DesignGoal::Identification,
                                            PriorKnowledge::Controllable);
  check(outcome, v_const.universal == Universality::NotUniversal,
        "constant input counted as universal");
  for (const auto pk : {PriorKnowledge::All, PriorKnowledge::Stabilizable}) {
    const auto v = universality_verdict(pe, ctx.n, DesignGoal::Identification, pk);
    check(outcome, v.universal == Universality::Impossible,
          "identification universality not impossible under prior '" + to_string(pk) + "'");
  }
  return outcome;
}

// No input is universal for identification under stabilizability prior
// knowledge.
TrialOutcome trial_no_universal_identification_stab(TrialContext& ctx) {
  TrialOutcome outcome;
  ctx.draw_dims();
  const auto pe = generate_pe_input(ctx.m, ctx.n + 1, std::nullopt, ctx.next_seed());
  const auto random = random_input(ctx, ctx.rng.uniform_int(1, ctx.n + ctx.m + 2));
  for (const auto& input : {pe, random}) {
    const auto v = universality_verdict(input, ctx.n, DesignGoal::Identification,
                                        PriorKnowledge::Stabilizable);
    check(outcome, v.universal == Universality::Impossible,
          "verdict is not 'impossible'");
  }
  return outcome;
}

// Full-row-rank synthesis: feasible exactly when a common stabilizer exists,
// with the witness identities holding on the data.
TrialOutcome trial_fullrank_synthesis(TrialContext& ctx) {
  TrialOutcome outcome;
  ctx.draw_dims(2);
  const bool positive = ctx.rng.bernoulli(0.5);
  const SystemClass cls =
      positive ? pick_class(ctx, {SystemClass::Controllable,
                                  SystemClass::StabilizableNotControllable})
               : SystemClass::NotStabilizable;
  const LtiSystem sys = draw_system(ctx, cls);
  outcome.system_class = to_string(cls);
  Rng x0_rng(ctx.next_seed());
  const Eigen::VectorXd x0 = x0_rng.normal_vector(ctx.n);
  const auto input = generate_pe_input(ctx.m, ctx.n + 1, std::nullopt, ctx.next_seed());
  const Dataset data = collect_dataset(sys, x0, input);

  if (trajectory_rank(data.X_minus()).rank < ctx.n) {
    outcome.detail = "X- rank deficient; rank gate exercised";
    check(outcome,
          !informative_for_stabilization(data, PriorKnowledge::All).informative,
          "rank-deficient data counted informative without prior knowledge");
    return outcome;
  }

  const auto cert = stabilize_fullrank(data);
  if (positive) {
    check(outcome, cert.has_value(), "synthesis infeasible on stabilizable truth");
    if (!outcome.pass) return outcome;
    const Eigen::MatrixXd X_minus = data.X_minus();
    const Eigen::MatrixXd P = X_minus * cert->theta;
    const Eigen::MatrixXd A_cl = data.X_plus() * cert->theta * P.inverse();
    check(outcome, spectral_radius(A_cl) < 1.0, "closed loop on data not Schur");
    check(outcome,
          std::abs(spectral_radius(A_cl) - cert->closed_loop_radius_on_data) <
              1e-6 * (1.0 + cert->closed_loop_radius_on_data),
          "certificate radius mismatch");
    const Eigen::MatrixXd K_check = data.U_minus() * cert->theta * P.inverse();
    check(outcome, (cert->K - K_check).norm() <= 1e-8 * (1.0 + K_check.norm()),
          "gain reconstruction identity violated");
    const auto audit =
        verify_gain_on_consistent_set(data, PriorKnowledge::All, cert->K, 20, ctx.next_seed());
    check(outcome, audit.all_stabilized(), "a consistent system escaped the gain");
  } else {
    check(outcome, !cert.has_value(), "synthesis feasible despite unstabilizable truth");
  }
  return outcome;
}

// Prior-knowledge dispatch for stabilization: controllability adds nothing,
// stabilizability adds nothing at full row rank, and on rank-deficient data it
// reduces to the two subspace conditions.
TrialOutcome trial_stabilization_dispatch(TrialContext& ctx) {
  TrialOutcome outcome;
  ctx.draw_dims(2);
  const int variant = ctx.rng.uniform_int(0, 2);
  if (variant == 0) {
    const LtiSystem sys = draw_system(ctx, SystemClass::Controllable);
    outcome.system_class = to_string(SystemClass::Controllable);
    Rng x0_rng(ctx.next_seed());
    const Eigen::VectorXd x0 = x0_rng.normal_vector(ctx.n);
    const int length = ctx.rng.uniform_int(1, ctx.n + ctx.m + 2);
    const Dataset data = collect_dataset(sys, x0, random_input(ctx, length));
    const Verdict with_cont = informative_for_stabilization(data, PriorKnowledge::Controllable);
    const Verdict with_all = informative_for_stabilization(data, PriorKnowledge::All);
    check(outcome, with_cont.informative == with_all.informative,
          "controllability prior changed the verdict");
  } else if (variant == 1) {
    const SystemClass cls = pick_class(
        ctx, {SystemClass::Controllable, SystemClass::StabilizableNotControllable});
    const LtiSystem sys = draw_system(ctx, cls);
    outcome.system_class = to_string(cls);
    Rng x0_rng(ctx.next_seed());
    const Eigen::VectorXd x0 = x0_rng.normal_vector(ctx.n);
    const auto input = generate_pe_input(ctx.m, ctx.n + 1, std::nullopt, ctx.next_seed());
    const Dataset data = collect_dataset(sys, x0, input);
    if (trajectory_rank(data.X_minus()).rank == ctx.n) {
      const Verdict with_stab = informative_for_stabilization(data, PriorKnowledge::Stabilizable);
      const Verdict with_all = informative_for_stabilization(data, PriorKnowledge::All);
      check(outcome, with_stab.informative == with_all.informative,
            "stabilizability prior changed the full-row-rank verdict");
    } else {
      outcome.detail = "rank-deficient draw; dispatch untested";
    }
  } else {
    const LtiSystem sys = draw_system(ctx, SystemClass::StabilizableNotControllable);
    outcome.system_class = to_string(SystemClass::StabilizableNotControllable);
    const auto x0 = adversarial_initial_state(sys, ctx.next_seed());
    check(outcome, x0.has_value(), "no adversarial state");
    if (!outcome.pass) return outcome;
    const bool rich = ctx.rng.bernoulli(0.7);
    const Dataset data = collect_dataset(
        sys, *x0,
        rich ? generate_pe_input(ctx.m, ctx.n + 1, std::nullopt, ctx.next_seed())
             : zero_input(ctx.m, ctx.n + 1));
    check(outcome, trajectory_rank(data.X_minus()).rank < ctx.n,
          "adversarial start still reached full row rank");
    const auto richness = data_richness_conditions(data, sys);
    const StabilizationOutcome result = stabilize_with_prior(data, PriorKnowledge::Stabilizable);
    check(outcome, result.verdict.informative == richness.state_product,
          "verdict disagrees with the subspace conditions");
    if (result.verdict.informative) {
      check(outcome, result.certificate.has_value(), "informative without certificate");
      check(outcome, spectral_radius(sys.A + sys.B * result.certificate->K) < 1.0,
            "gain fails on the truth");
    }
  }
  return outcome;
}

// The two trajectory product conditions are equivalent, and persistency of
// excitation of order n+1 implies both.
TrialOutcome trial_richness_equivalence(TrialContext& ctx) {
  TrialOutcome outcome;
  ctx.draw_dims(2);
  const SystemClass cls = pick_class(
      ctx, {SystemClass::Controllable, SystemClass::StabilizableNotControllable,
            SystemClass::NotStabilizable});
  const LtiSystem sys = draw_system(ctx, cls);
  outcome.system_class = to_string(cls);

  Eigen::VectorXd x0;
  const auto adversarial = adversarial_initial_state(sys, ctx.next_seed());
  if (adversarial && ctx.rng.bernoulli(0.5)) {
    x0 = *adversarial;
  } else {
    Rng x0_rng(ctx.next_seed());
    x0 = x0_rng.normal_vector(ctx.n);
  }

  const int kind = ctx.rng.uniform_int(0, 2);
  std::vector<Eigen::VectorXd> input;
  if (kind == 0)
    input = generate_pe_input(ctx.m, ctx.n + 1, std::nullopt, ctx.next_seed());
  else if (kind == 1)
    input = random_input(ctx, ctx.rng.uniform_int(1, ctx.n));
  else
    input = zero_input(ctx.m, ctx.n);

  const Dataset data = collect_dataset(sys, x0, input);
  const auto richness = data_richness_conditions(data, sys);
  check(outcome, richness.reachable_product.has_value(), "system condition missing");
  check(outcome, *richness.reachable_product == richness.state_product,
        "product conditions disagree");
  if (richness.pe_sufficient)
    check(outcome, richness.state_product && *richness.reachable_product,
          "persistent excitation did not imply the product conditions");
  return outcome;
}

// Stabilizable truth + persistently exciting input of order n+1: informative
// for stabilization under stabilizability prior knowledge, and the gain
// stabilizes the truth.
TrialOutcome trial_offline_stabilization(TrialContext& ctx) {
  TrialOutcome outcome;
  ctx.draw_dims(2);
  const LtiSystem sys = draw_system(ctx, SystemClass::StabilizableNotControllable);
  outcome.system_class = to_string(SystemClass::StabilizableNotControllable);
  Rng x0_rng(ctx.next_seed());
  const Eigen::VectorXd x0 = x0_rng.normal_vector(ctx.n);
  const auto input = generate_pe_input(ctx.m, ctx.n + 1, std::nullopt, ctx.next_seed());
  const Dataset data = collect_dataset(sys, x0, input);

  const StabilizationOutcome result = stabilize_with_prior(data, PriorKnowledge::Stabilizable);
  check(outcome, result.verdict.informative, "not informative for stabilization");
  if (!outcome.pass) return outcome;
  const double radius = spectral_radius(sys.A + sys.B * result.certificate->K);
  check(outcome, radius < 1.0, "closed loop on the truth not Schur");
  std::ostringstream detail;
  detail << "closed-loop radius " << radius;
  outcome.detail = detail.str();
  return outcome;
}

// Universality table for stabilization: impossible without prior knowledge,
// and under controllability/stabilizability priors exactly the persistently
// exciting inputs qualify.
TrialOutcome trial_universal_stabilization_table(TrialContext& ctx) {
  TrialOutcome outcome;
  ctx.draw_dims();
  const auto pe = generate_pe_input(ctx.m, ctx.n + 1, std::nullopt, ctx.next_seed());
  const auto constant = std::vector<Eigen::VectorXd>(
      ctx.n + 2, Eigen::VectorXd::Ones(ctx.m));

  for (const auto pk : {PriorKnowledge::Stabilizable, PriorKnowledge::Controllable}) {
    const auto v_pe = universality_verdict(pe, ctx.n, DesignGoal::Stabilization, pk);
    check(outcome, v_pe.universal == Universality::Universal,
          "persistently exciting input not universal under prior '" + to_string(pk) + "'");
    const auto v_const =
        universality_verdict(constant, ctx.n, DesignGoal::Stabilization, pk);
    check(outcome, v_const.universal == Universality::NotUniversal,
          "constant input counted as universal");
  }
  const auto v_all = universality_verdict(pe, ctx.n, DesignGoal::Stabilization,
                                          PriorKnowledge::All);
  check(outcome, v_all.universal == Universality::Impossible,
        "stabilization universality not impossible without prior knowledge");
  return outcome;
}

// Online design: termination at dim R(A, [B x0]) + m with single-step rank
// growth, certified exit conditions, and informative output data.
TrialOutcome trial_online_design(TrialContext& ctx) {
  TrialOutcome outcome;
  ctx.draw_dims(2);
  const SystemClass cls = pick_class(
      ctx, {SystemClass::Controllable, SystemClass::StabilizableNotControllable});
  const LtiSystem sys = draw_system(ctx, cls);
  outcome.system_class = to_string(cls);

  Eigen::VectorXd x0;
  const auto adversarial = adversarial_initial_state(sys, ctx.next_seed());
  if (adversarial && ctx.rng.bernoulli(0.5)) {
    x0 = *adversarial;
  } else {
    Rng x0_rng(ctx.next_seed());
    x0 = x0_rng.normal_vector(ctx.n);
  }

  SimulatedPlant plant(sys, x0);
  const InputPolicy policy = ctx.rng.bernoulli(0.5)
                                 ? InputPolicy::deterministic()
                                 : InputPolicy::seeded(ctx.next_seed());
  const OnlineRun run = run_online_design(plant, policy);

  check(outcome, run.length == predicted_length(sys, x0),
        "run length differs from the reachability prediction");
  check(outcome, run.exit_product_condition && run.exit_state_in_image,
        "exit certificate missing");
  const Eigen::MatrixXd XU = run.dataset.XU_minus();
  for (int t = 0; t < run.length && outcome.pass; ++t)
    check(outcome,
          trajectory_rank(Eigen::MatrixXd(XU.leftCols(t + 1))).rank == t + 1,
          "rank growth not single-step at t = " + std::to_string(t));

  if (cls == SystemClass::Controllable) {
    check(outcome, run.length == ctx.n + ctx.m, "controllable run not of length n+m");
    check(outcome,
          informative_for_identification(run.dataset, PriorKnowledge::Controllable).informative,
          "output data not informative for identification");
    if (outcome.pass)
      check(outcome, identification_error(run.dataset, sys) <= 1e-8,
            "identification error above 1e-8");
  }
  const StabilizationOutcome result =
      stabilize_with_prior(run.dataset, PriorKnowledge::Stabilizable);
  check(outcome, result.verdict.informative,
        "output data not informative for stabilization");
  if (outcome.pass && result.certificate)
    check(outcome, spectral_radius(sys.A + sys.B * result.certificate->K) < 1.0,
          "online gain fails on the truth");
  std::ostringstream detail;
  detail << "T = " << run.length;
  if (outcome.pass) outcome.detail = detail.str();
  return outcome;
}

// Uncontrollable stabilizable truth with an adversarial start: the online run
// is the shortest dataset that supports gain synthesis, strictly shorter than
// n + m, and no proper prefix qualifies.
TrialOutcome trial_shortest_experiment(TrialContext& ctx) {
  TrialOutcome outcome;
  ctx.draw_dims(2);
  const LtiSystem sys = draw_system(ctx, SystemClass::StabilizableNotControllable);
  outcome.system_class = to_string(SystemClass::StabilizableNotControllable);
  const auto x0 = adversarial_initial_state(sys, ctx.next_seed());
  check(outcome, x0.has_value(), "no adversarial state");
  if (!outcome.pass) return outcome;

  SimulatedPlant plant(sys, *x0);
  const InputPolicy policy = ctx.rng.bernoulli(0.5)
                                 ? InputPolicy::deterministic()
                                 : InputPolicy::seeded(ctx.next_seed());
  const OnlineRun run = run_online_design(plant, policy);

  const int predicted = predicted_length(sys, *x0);
  check(outcome, run.length == predicted, "run length differs from prediction");
  check(outcome, run.length < ctx.n + ctx.m, "run not shorter than n + m");
  const auto shortest = shortest_length_for_stabilization(sys, *x0);
  check(outcome, shortest.exact.has_value() && *shortest.exact == run.length,
        "shortest-length formula disagrees");

  check(outcome,
        informative_for_stabilization(run.dataset, PriorKnowledge::Stabilizable).informative,
        "final dataset not informative");
  for (int t = 1; t < run.length && outcome.pass; ++t)
    check(outcome,
          !informative_for_stabilization(run.dataset.prefix(t), PriorKnowledge::Stabilizable)
               .informative,
          "proper prefix of length " + std::to_string(t) + " already informative");
  std::ostringstream detail;
  detail << "T = " << run.length << " < " << ctx.n + ctx.m;
  if (outcome.pass) outcome.detail = detail.str();
  return outcome;
}

const std::map<std::string, std::pair<std::string, TrialProcedure>>& registry() {
  static const std::map<std::string, std::pair<std::string, TrialProcedure>> table = {
      {"thm4-equivalence",
       {"identification verdicts coincide across priors and reduce to the rank test",
        trial_identification_equivalence}},
      {"cor5-openness",
       {"prior knowledge of controllability or stabilizability never changes the identification verdict",
        trial_identification_equivalence}},
      {"lemma6-pe-rank",
       {"persistently exciting inputs of order n+1 give full-row-rank data on controllable systems",
        trial_pe_rank}},
      {"thm8-forward",
       {"persistently exciting inputs of order n+1 identify every controllable system",
        trial_offline_identification}},
      {"thm9-impossibility",
       {"uncontrollable systems with adversarial starts never yield identification-informative data",
        trial_identification_impossible}},
      {"cor10-largest-id",
       {"universal inputs for identification exist only under controllability prior knowledge",
        trial_universal_identification_table}},
      {"cor11-no-universal-id",
       {"no input is universal for identification under stabilizability prior knowledge",
        trial_no_universal_identification_stab}},
      {"prop12-fullrank",
       {"full-row-rank stabilization synthesis is feasible exactly for commonly stabilizable data",
        trial_fullrank_synthesis}},
      {"prop13-dispatch",
       {"stabilization verdicts dispatch correctly across priors and rank cases",
        trial_stabilization_dispatch}},
      {"lemma14-equivalence",
       {"the trajectory product conditions are equivalent and follow from persistent excitation",
        trial_richness_equivalence}},
      {"thm15-forward",
       {"persistently exciting inputs of order n+1 stabilize every stabilizable system",
        trial_offline_stabilization}},
      {"cor16-largest-stab",
       {"universal inputs for stabilization exist exactly under stabilizability or controllability priors",
        trial_universal_stabilization_table}},
      {"lemma17-length",
       {"online design terminates at dim R(A,[B x0]) + m with informative output data",
        trial_online_design}},
      {"thm18-shortest",
       {"online design from adversarial starts yields the shortest stabilization dataset",
        trial_shortest_experiment}},
  };
  return table;
}

}  // namespace

const std::vector<std::string>& registered_theorems() {
  static const std::vector<std::string> ids = [] {
    std::vector<std::string> list;
    for (const auto& [id, entry] : registry()) list.push_back(id);
    return list;
  }();
  return ids;
}

bool is_registered_theorem(const std::string& id) {
  return registry().count(id) > 0;
}

std::string theorem_description(const std::string& id) {
  const auto it = registry().find(id);
  if (it == registry().end()) throw std::invalid_argument("unknown theorem id '" + id + "'");
  return it->second.first;
}

CampaignReport run_campaign(const CampaignSpec& spec) {
  const auto it = registry().find(spec.theorem);
  if (it == registry().end())
    throw std::invalid_argument("unknown theorem id '" + spec.theorem + "'");
  const TrialProcedure& procedure = it->second.second;

  CampaignReport report;
  report.spec = spec;
  const auto start = std::chrono::steady_clock::now();
  for (int i = 0; i < spec.trials; ++i) {
    const std::uint64_t trial_seed =
        (i == 0 && spec.trial_seed_override) ? *spec.trial_seed_override
                                             : split_seed(spec.seed, static_cast<std::uint64_t>(i));
    TrialContext ctx(trial_seed, i, spec.n_range, spec.m_range);
    TrialRecord record;
    record.index = i;
    record.seed = trial_seed;
    try {
      const TrialOutcome outcome = procedure(ctx);
      record.pass = outcome.pass;
      record.detail = outcome.detail;
      record.system_class = outcome.system_class;
    } catch (const std::exception& e) {
      record.pass = false;
      record.detail = std::string("exception: ") + e.what();
    }
    record.n = ctx.n;
    record.m = ctx.m;
    if (record.pass)
      ++report.pass_count;
    else
      ++report.fail_count;
    report.trials.push_back(std::move(record));
  }
  report.wall_time_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
          .count();
  return report;
}

std::string reproduction_command(const CampaignSpec& spec, const TrialRecord& trial) {
  std::ostringstream cmd;
  cmd << "exdesign campaign --theorem " << spec.theorem << " --trials 1"
      << " --trial-seed " << trial.seed << " --n-min " << trial.n << " --n-max "
      << trial.n << " --m-min " << trial.m << " --m-max " << trial.m;
  return cmd.str();
}

}  // namespace exdesign
