#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "exdesign/campaign.hpp"
#include "exdesign/informativity.hpp"
#include "exdesign/online.hpp"
#include "exdesign/synthesis.hpp"
#include "exdesign/system.hpp"

namespace exdesign {

/// Raised on malformed input files; names the offending field.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string field_in, const std::string& message)
      : std::runtime_error("field '" + field_in + "': " + message),
        field(std::move(field_in)) {}
  std::string field;
};

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

// Systems: {"n": ..., "m": ..., "A": row-major flat array, "B": row-major flat array}
std::string to_json(const LtiSystem& sys);
LtiSystem system_from_json(const std::string& text);

// Datasets: {"T": ..., "inputs": [[...], ...], "states": [[...], ...]}
std::string to_json(const Dataset& data);
Dataset dataset_from_json(const std::string& text);

/// CSV trajectory import: one row per time step with columns u_1..u_m,
/// x_1..x_n; the final row carries only the state (input columns, when
/// present, are ignored there). An optional header row is skipped.
Dataset dataset_from_csv(const std::string& text, int m, int n);

// Input signals: a JSON array of vectors.
std::string to_json(const std::vector<Eigen::VectorXd>& input);
std::vector<Eigen::VectorXd> input_from_json(const std::string& text);

// Plain vectors: a JSON array of numbers.
std::string to_json(const Eigen::VectorXd& v);
Eigen::VectorXd vector_from_json(const std::string& text);

std::string to_json(const GainCertificate& cert);

std::string to_json(const OnlineRun& run);

std::string to_json(const CampaignSpec& spec);
CampaignSpec campaign_spec_from_json(const std::string& text);

std::string to_json(const CampaignReport& report);

std::string to_json(const Verdict& verdict);

}  // namespace exdesign
