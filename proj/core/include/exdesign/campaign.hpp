#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace exdesign {

struct DimRange {
  int lo = 2;
  int hi = 5;
};

/// A Monte-Carlo audit of one registered property. The theorem id selects the
/// trial procedure; per-trial seeds derive from the campaign seed by a
/// splittable scheme, so results do not depend on execution order.
struct CampaignSpec {
  std::string name;
  std::string theorem;
  int trials = 1;
  DimRange n_range{2, 5};
  DimRange m_range{1, 3};
  std::uint64_t seed = 1;
  /// When set, trial 0 uses this seed verbatim; emitted by failure reports so
  /// a single trial can be replayed exactly.
  std::optional<std::uint64_t> trial_seed_override;
};

struct TrialRecord {
  int index = 0;
  std::uint64_t seed = 0;
  int n = 0;
  int m = 0;
  std::string system_class;
  bool pass = false;
  std::string detail;
};

struct CampaignReport {
  CampaignSpec spec;
  int pass_count = 0;
  int fail_count = 0;
  double wall_time_ms = 0.0;
  std::vector<TrialRecord> trials;
};

/// Ids accepted by run_campaign.
const std::vector<std::string>& registered_theorems();

bool is_registered_theorem(const std::string& id);

/// One-line description of what a registered id audits.
std::string theorem_description(const std::string& id);

CampaignReport run_campaign(const CampaignSpec& spec);

/// Command line that replays a single recorded trial.
std::string reproduction_command(const CampaignSpec& spec, const TrialRecord& trial);

}  // namespace exdesign
