// Command-line front end: offline and online experiment design, data
// informativity checks, identification, gain synthesis, and property
// campaigns over randomized systems.
//
// Exit codes: 0 success or passing verdict, 1 negative verdict or failed
// campaign, 2 usage or file-format errors.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "exdesign/campaign.hpp"
#include "exdesign/informativity.hpp"
#include "exdesign/input_design.hpp"
#include "exdesign/io.hpp"
#include "exdesign/online.hpp"
#include "exdesign/synthesis.hpp"
#include "exdesign/system.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

using exdesign::PriorKnowledge;

PriorKnowledge parse_pk(const std::string& text) {
  if (text == "all") return PriorKnowledge::All;
  if (text == "cont") return PriorKnowledge::Controllable;
  if (text == "stab") return PriorKnowledge::Stabilizable;
  throw CLI::ValidationError("--pk", "expected one of all|cont|stab");
}

void emit(const std::string& content, const std::string& output_path) {
  if (output_path.empty())
    std::cout << content;
  else
    exdesign::write_text_file(output_path, content);
}

int cmd_pe_check(const std::string& file, int order) {
  const auto input = exdesign::input_from_json(exdesign::read_text_file(file));
  const int found = exdesign::pe_order(input);
  std::cout << "pe_order = " << found << " (required >= " << order << ")\n";
  return found >= order ? kExitPass : kExitFail;
}

int cmd_design_offline(int n, int m, std::optional<int> length, std::uint64_t seed,
                       const std::string& output) {
  const auto input = exdesign::generate_pe_input(m, n + 1, length, seed);
  emit(exdesign::to_json(input), output);
  if (!output.empty())
    std::cerr << "wrote length-" << input.size() << " input exciting of order "
              << n + 1 << " to " << output << "\n";
  return kExitPass;
}

int cmd_design_online(const std::string& system_file, const std::string& replay_file,
                      const std::string& x0_arg, std::uint64_t seed, bool seeded_policy,
                      int max_steps, const std::string& output,
                      const std::string& trace_output) {
  std::unique_ptr<exdesign::PlantOracle> plant;
  if (!replay_file.empty()) {
    plant = std::make_unique<exdesign::ReplayPlant>(
        exdesign::dataset_from_json(exdesign::read_text_file(replay_file)));
  } else {
    const exdesign::LtiSystem sys =
        exdesign::system_from_json(exdesign::read_text_file(system_file));
    Eigen::VectorXd x0;
    if (x0_arg == "zero") {
      x0 = Eigen::VectorXd::Zero(sys.n());
    } else if (x0_arg == "adversarial") {
      const auto adversarial = exdesign::adversarial_initial_state(sys, seed);
      if (!adversarial) {
        std::cerr << "the system is controllable: every initial state leads to "
                     "identification-informative data\n";
        return kExitFail;
      }
      x0 = *adversarial;
    } else {
      x0 = exdesign::vector_from_json(exdesign::read_text_file(x0_arg));
      if (x0.size() != sys.n())
        throw exdesign::ParseError("x0", "expected " + std::to_string(sys.n()) + " entries");
    }
    plant = std::make_unique<exdesign::SimulatedPlant>(sys, x0);
  }

  const exdesign::InputPolicy policy = seeded_policy
                                           ? exdesign::InputPolicy::seeded(seed)
                                           : exdesign::InputPolicy::deterministic();
  const exdesign::OnlineRun run =
      max_steps > 0 ? exdesign::run_online_design(*plant, policy, max_steps)
                    : exdesign::run_online_design(*plant, policy);

  emit(exdesign::to_json(run.dataset), output);
  if (!trace_output.empty())
    exdesign::write_text_file(trace_output, exdesign::to_json(run));
  std::cerr << "online design terminated at T = " << run.length << "\n";
  return kExitPass;
}

int cmd_informativity(const std::string& data_file, const std::string& goal,
                      const std::string& pk_text) {
  const exdesign::Dataset data =
      exdesign::dataset_from_json(exdesign::read_text_file(data_file));
  const PriorKnowledge pk = parse_pk(pk_text);
  exdesign::Verdict verdict;
  if (goal == "id")
    verdict = exdesign::informative_for_identification(data, pk);
  else if (goal == "stab")
    verdict = exdesign::informative_for_stabilization(data, pk);
  else
    throw CLI::ValidationError("--goal", "expected id|stab");
  std::cout << exdesign::to_json(verdict);
  return verdict.informative ? kExitPass : kExitFail;
}

int cmd_identify(const std::string& data_file, const std::string& output) {
  const exdesign::Dataset data =
      exdesign::dataset_from_json(exdesign::read_text_file(data_file));
  try {
    const exdesign::LtiSystem sys = exdesign::identify(data);
    emit(exdesign::to_json(sys), output);
    return kExitPass;
  } catch (const exdesign::NotInformativeError& e) {
    std::cerr << e.what() << " (rank " << e.rank_report.rank << ", tol "
              << e.rank_report.tol_used << ")\n";
    return kExitFail;
  }
}

int cmd_stabilize(const std::string& data_file, const std::string& pk_text,
                  const std::string& output) {
  const exdesign::Dataset data =
      exdesign::dataset_from_json(exdesign::read_text_file(data_file));
  const exdesign::StabilizationOutcome outcome =
      exdesign::stabilize_with_prior(data, parse_pk(pk_text));
  if (!outcome.informative()) {
    std::cerr << "data is not informative for stabilization under prior '"
              << pk_text << "'\n"
              << exdesign::to_json(outcome.verdict);
    return kExitFail;
  }
  emit(exdesign::to_json(*outcome.certificate), output);
  return kExitPass;
}

int cmd_campaign(const exdesign::CampaignSpec& spec, const std::string& output) {
  const exdesign::CampaignReport report = exdesign::run_campaign(spec);
  for (const auto& trial : report.trials)
    if (!trial.pass)
      std::cout << "trial " << trial.index << " FAILED: " << trial.detail
                << "\n  reproduce: " << exdesign::reproduction_command(spec, trial)
                << "\n";
  std::cout << spec.theorem << ": " << report.pass_count << "/" << spec.trials
            << " trials passed (" << report.wall_time_ms << " ms)\n";
  if (!output.empty()) exdesign::write_text_file(output, exdesign::to_json(report));
  return report.fail_count == 0 ? kExitPass : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"experiment design toolkit for data-driven control of "
               "discrete-time linear systems"};
  app.require_subcommand(1);

  // pe-check
  auto* pe_check = app.add_subcommand("pe-check", "check persistency of excitation of an input file");
  std::string pe_file;
  int pe_order_required = 1;
  pe_check->add_option("file", pe_file, "JSON input signal (array of vectors)")->required();
  pe_check->add_option("--order", pe_order_required, "order to certify")->required();

  // design-offline
  auto* offline = app.add_subcommand("design-offline", "generate a universal input of order n+1");
  int off_n = 0, off_m = 0;
  std::optional<int> off_length;
  std::uint64_t off_seed = 1;
  std::string off_output;
  offline->add_option("--n", off_n, "state dimension")->required();
  offline->add_option("--m", off_m, "input dimension")->required();
  offline->add_option("--length", off_length, "input length (default: minimal)");
  offline->add_option("--seed", off_seed, "RNG seed");
  offline->add_option("-o,--output", off_output, "output file (default: stdout)");

  // design-online
  auto* online = app.add_subcommand("design-online", "run the adaptive online experiment");
  std::string on_system, on_replay, on_x0 = "zero", on_output, on_trace;
  std::uint64_t on_seed = 1;
  bool on_seeded_policy = false;
  int on_max_steps = 0;
  auto* system_opt = online->add_option("--system", on_system, "plant model JSON file");
  online->add_option("--replay", on_replay, "recorded trajectory JSON file to replay")
      ->excludes(system_opt);
  online->add_option("--x0", on_x0, "initial state: zero | adversarial | <vector JSON file>");
  online->add_option("--seed", on_seed, "RNG seed for adversarial x0 / seeded policy");
  online->add_flag("--seeded-policy", on_seeded_policy, "draw free inputs from a seeded Gaussian");
  online->add_option("--max-steps", on_max_steps, "safety bound (default n+m+2)");
  online->add_option("-o,--output", on_output, "dataset output file");
  online->add_option("--trace", on_trace, "trace output file");

  // informativity
  auto* info = app.add_subcommand("informativity", "informativity verdict for a dataset");
  std::string info_file, info_goal, info_pk;
  info->add_option("file", info_file, "dataset JSON file")->required();
  info->add_option("--goal", info_goal, "id | stab")->required();
  info->add_option("--pk", info_pk, "prior knowledge: all | cont | stab")->required();

  // identify
  auto* identify_cmd = app.add_subcommand("identify", "unique system from informative data");
  std::string id_file, id_output;
  identify_cmd->add_option("file", id_file, "dataset JSON file")->required();
  identify_cmd->add_option("-o,--output", id_output, "output file (default: stdout)");

  // stabilize
  auto* stabilize_cmd = app.add_subcommand("stabilize", "stabilizing gain from informative data");
  std::string st_file, st_pk = "all", st_output;
  stabilize_cmd->add_option("file", st_file, "dataset JSON file")->required();
  stabilize_cmd->add_option("--pk", st_pk, "prior knowledge: all | cont | stab");
  stabilize_cmd->add_option("-o,--output", st_output, "output file (default: stdout)");

  // campaign
  auto* campaign_cmd = app.add_subcommand("campaign", "run a randomized property campaign");
  std::string ca_spec_file, ca_output, ca_theorem;
  int ca_trials = 0;
  std::uint64_t ca_seed = 1;
  std::optional<std::uint64_t> ca_trial_seed;
  int ca_n_min = 2, ca_n_max = 5, ca_m_min = 1, ca_m_max = 3;
  bool ca_list = false;
  campaign_cmd->add_option("spec", ca_spec_file, "campaign spec JSON file");
  campaign_cmd->add_option("-o,--output", ca_output, "report output file");
  campaign_cmd->add_option("--theorem", ca_theorem, "registered property id (instead of a spec file)");
  campaign_cmd->add_option("--trials", ca_trials, "trial count");
  campaign_cmd->add_option("--seed", ca_seed, "campaign seed");
  campaign_cmd->add_option("--trial-seed", ca_trial_seed, "seed trial 0 verbatim (for reproduction)");
  campaign_cmd->add_option("--n-min", ca_n_min, "");
  campaign_cmd->add_option("--n-max", ca_n_max, "");
  campaign_cmd->add_option("--m-min", ca_m_min, "");
  campaign_cmd->add_option("--m-max", ca_m_max, "");
  campaign_cmd->add_flag("--list", ca_list, "list registered property ids");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitUsage;
  }

  try {
    if (pe_check->parsed()) return cmd_pe_check(pe_file, pe_order_required);
    if (offline->parsed())
      return cmd_design_offline(off_n, off_m, off_length, off_seed, off_output);
    if (online->parsed()) {
      if (on_system.empty() && on_replay.empty())
        throw CLI::ValidationError("--system", "either --system or --replay is required");
      return cmd_design_online(on_system, on_replay, on_x0, on_seed, on_seeded_policy,
                               on_max_steps, on_output, on_trace);
    }
    if (info->parsed()) return cmd_informativity(info_file, info_goal, info_pk);
    if (identify_cmd->parsed()) return cmd_identify(id_file, id_output);
    if (stabilize_cmd->parsed()) return cmd_stabilize(st_file, st_pk, st_output);
    if (campaign_cmd->parsed()) {
      if (ca_list) {
        for (const auto& id : exdesign::registered_theorems())
          std::cout << id << ": " << exdesign::theorem_description(id) << "\n";
        return kExitPass;
      }
      exdesign::CampaignSpec spec;
      if (!ca_spec_file.empty()) {
        spec = exdesign::campaign_spec_from_json(exdesign::read_text_file(ca_spec_file));
        if (!ca_output.empty()) {
          // keep the -o override
        } else {
          ca_output = ca_spec_file + ".report.json";
        }
      } else {
        if (ca_theorem.empty())
          throw CLI::ValidationError("campaign", "a spec file or --theorem is required");
        spec.name = ca_theorem;
        spec.theorem = ca_theorem;
        spec.trials = ca_trials > 0 ? ca_trials : 1;
        spec.seed = ca_seed;
        spec.trial_seed_override = ca_trial_seed;
        spec.n_range = {ca_n_min, ca_n_max};
        spec.m_range = {ca_m_min, ca_m_max};
      }
      if (!exdesign::is_registered_theorem(spec.theorem)) {
        std::cerr << "unknown theorem id '" << spec.theorem << "'; known ids:\n";
        for (const auto& id : exdesign::registered_theorems()) std::cerr << "  " << id << "\n";
        return kExitUsage;
      }
      return cmd_campaign(spec, ca_output);
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const exdesign::ParseError& e) {
    std::cerr << "malformed file: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
