#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "exdesign/informativity.hpp"
#include "exdesign/linalg.hpp"

namespace exdesign {

enum class DesignGoal { Identification, Stabilization };

/// Tri-state universality outcome: a verdict about the given input, or
/// Impossible when no input whatsoever is universal for the goal/prior pair.
enum class Universality { Universal, NotUniversal, Impossible };

std::string to_string(DesignGoal goal);
std::string to_string(Universality u);

/// Largest k such that the input has length at least k and its depth-k Hankel
/// matrix has full row rank k*m; 0 when even k = 1 fails.
int pe_order(const std::vector<Eigen::VectorXd>& input);

/// Gaussian input of the requested length (default: the dimension-minimal
/// k*(m+1) - 1) that verifies pe_order >= k; redraws on the rare failing draw.
std::vector<Eigen::VectorXd> generate_pe_input(int m, int order,
                                               std::optional<int> length,
                                               std::uint64_t seed);

struct UniversalityVerdict {
  DesignGoal goal;
  PriorKnowledge pk;
  Universality universal = Universality::NotUniversal;
  int pe_order_required = 0;  // n + 1
  int pe_order_found = 0;
  RankReport hankel_rank_report;  // depth n+1 Hankel, when the length allows it
};

/// Offline design table. With controllability prior knowledge an input is
/// universal for identification iff it is persistently exciting of order n+1;
/// for stabilization the same test applies under controllability or
/// stabilizability prior knowledge. Identification without controllability
/// prior knowledge and stabilization without any prior knowledge admit no
/// universal input at all.
UniversalityVerdict universality_verdict(const std::vector<Eigen::VectorXd>& input,
                                         int n, DesignGoal goal,
                                         PriorKnowledge pk);

}  // namespace exdesign
