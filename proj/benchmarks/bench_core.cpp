#include <benchmark/benchmark.h>

#include "exdesign/informativity.hpp"
#include "exdesign/input_design.hpp"
#include "exdesign/online.hpp"
#include "exdesign/rng.hpp"
#include "exdesign/synthesis.hpp"
#include "exdesign/system.hpp"

namespace {

using namespace exdesign;

Dataset benchmark_dataset(int n, int m, std::uint64_t seed) {
  const LtiSystem sys = random_system(SystemClass::Controllable, n, m, seed);
  Rng rng(split_seed(seed, 1));
  const auto input = generate_pe_input(m, n + 1, std::nullopt, split_seed(seed, 2));
  return collect_dataset(sys, rng.normal_vector(n), input);
}

void BM_HankelRank(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const int order = static_cast<int>(state.range(1));
  const auto input = generate_pe_input(m, order, std::nullopt, 7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(numerical_rank(hankel(input, order)).rank);
  }
}
BENCHMARK(BM_HankelRank)->Args({1, 4})->Args({3, 7});

void BM_InformativityVerdict(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Dataset data = benchmark_dataset(n, 2, 11);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        informative_for_identification(data, PriorKnowledge::All).informative);
  }
}
BENCHMARK(BM_InformativityVerdict)->Arg(3)->Arg(6);

void BM_StabilizeFullrank(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Dataset data = benchmark_dataset(n, 2, 13);
  for (auto _ : state) {
    benchmark::DoNotOptimize(stabilize_fullrank(data).has_value());
  }
}
BENCHMARK(BM_StabilizeFullrank)->Arg(3)->Arg(6);

void BM_OnlineRun(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const LtiSystem sys = random_system(SystemClass::Controllable, n, 2, 17);
  Rng rng(19);
  const Eigen::VectorXd x0 = rng.normal_vector(n);
  for (auto _ : state) {
    SimulatedPlant plant(sys, x0);
    benchmark::DoNotOptimize(
        run_online_design(plant, InputPolicy::deterministic()).length);
  }
}
BENCHMARK(BM_OnlineRun)->Arg(3)->Arg(6);

}  // namespace

BENCHMARK_MAIN();
