#include "exdesign/input_design.hpp"

#include <stdexcept>

#include "exdesign/rng.hpp"

namespace exdesign {

std::string to_string(DesignGoal goal) {
  return goal == DesignGoal::Identification ? "identification" : "stabilization";
}

std::string to_string(Universality u) {
  switch (u) {
    case Universality::Universal: return "universal";
    case Universality::NotUniversal: return "not_universal";
    case Universality::Impossible: return "impossible";
  }
  return "unknown";
}

int pe_order(const std::vector<Eigen::VectorXd>& input) {
  if (input.empty()) throw std::invalid_argument("pe_order: empty input");
  const int T = static_cast<int>(input.size());
  const int m = static_cast<int>(input.front().size());
  int order = 0;
  for (int k = 1; k <= T; ++k) {
    if (T - k + 1 < k * m) break;  // too few columns for full row rank
    if (numerical_rank(hankel(input, k)).rank != k * m) break;
    order = k;
  }
  return order;
}

std::vector<Eigen::VectorXd> generate_pe_input(int m, int order,
                                               std::optional<int> length,
                                               std::uint64_t seed) {
  if (m < 1 || order < 1)
    throw std::invalid_argument("generate_pe_input: dimensions must be positive");
  const int minimal = order * (m + 1) - 1;
  const int T = length.value_or(minimal);
  if (T < minimal)
    throw std::invalid_argument("generate_pe_input: length " + std::to_string(T) +
                                " below the dimension bound " + std::to_string(minimal));
  for (int attempt = 0; attempt < 16; ++attempt) {
    Rng rng(split_seed(seed, static_cast<std::uint64_t>(attempt)));
    std::vector<Eigen::VectorXd> input;
    input.reserve(T);
    for (int t = 0; t < T; ++t) input.push_back(rng.normal_vector(m));
    if (pe_order(input) >= order) return input;
  }
  throw std::runtime_error(
      "generate_pe_input: 16 Gaussian draws failed the excitation check; "
      "this indicates an RNG or dimension defect");
}

UniversalityVerdict universality_verdict(const std::vector<Eigen::VectorXd>& input,
                                         int n, DesignGoal goal,
                                         PriorKnowledge pk) {
  if (n < 1) throw std::invalid_argument("universality_verdict: n must be positive");
  UniversalityVerdict verdict;
  verdict.goal = goal;
  verdict.pk = pk;
  verdict.pe_order_required = n + 1;
  verdict.pe_order_found = pe_order(input);
  if (static_cast<int>(input.size()) >= n + 1)
    verdict.hankel_rank_report = numerical_rank(hankel(input, n + 1));

  const bool impossible =
      (goal == DesignGoal::Identification && pk != PriorKnowledge::Controllable) ||
      (goal == DesignGoal::Stabilization && pk == PriorKnowledge::All);
  if (impossible) {
    verdict.universal = Universality::Impossible;
  } else {
    verdict.universal = verdict.pe_order_found >= n + 1
                            ? Universality::Universal
                            : Universality::NotUniversal;
  }
  return verdict;
}

}  // namespace exdesign
