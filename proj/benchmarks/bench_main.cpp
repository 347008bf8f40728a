#include <benchmark/benchmark.h>

#include "bgap/distortion.hpp"
#include "bgap/generators.hpp"
#include "bgap/gross.hpp"
#include "bgap/groups.hpp"
#include "bgap/mazur.hpp"
#include "bgap/spectral.hpp"

namespace {

using namespace bgap;

void BM_GapExact2(benchmark::State& state) {
  const MultiGraph g = random_regular_graph(static_cast<int>(state.range(0)), 3, 1);
  for (auto _ : state) benchmark::DoNotOptimize(gap_exact_2(g).value);
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_GapExact2)->RangeMultiplier(2)->Range(16, 256)->Complexity();

void BM_GapEstimate(benchmark::State& state) {
  const MultiGraph g = random_regular_graph(static_cast<int>(state.range(0)), 3, 1);
  const DescentOptions opts{.restarts = 4, .max_iter = 1000, .tol = 1e-10, .seed = 0};
  for (auto _ : state) benchmark::DoNotOptimize(gap_estimate(g, 3.0, 2.0, 1, opts).value);
}
BENCHMARK(BM_GapEstimate)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_TwoFactorize(benchmark::State& state) {
  const MultiGraph base = even_regularize(random_regular_graph(static_cast<int>(state.range(0)), 5, 1));
  for (auto _ : state) benchmark::DoNotOptimize(two_factorize(base, 0).perms.size());
}
BENCHMARK(BM_TwoFactorize)->RangeMultiplier(4)->Range(64, 4096);

void BM_Kappa(benchmark::State& state) {
  const PermutationAction a = action_from_group(parse_group("sl_mod:2:" + std::to_string(state.range(0))));
  const KappaOptions opts{.restarts = 2, .max_iter = 500, .tol = 1e-10, .seed = 0};
  for (auto _ : state) benchmark::DoNotOptimize(kappa_estimate(a, 2.0, 0, opts).value);
}
BENCHMARK(BM_Kappa)->Arg(3)->Arg(5)->Unit(benchmark::kMillisecond);

void BM_MaxDisplacementMatching(benchmark::State& state) {
  const MetricTable m = all_pairs_distances(random_regular_graph(static_cast<int>(state.range(0)), 3, 2));
  for (auto _ : state) benchmark::DoNotOptimize(max_displacement(m, DisplacementMode::matching).value);
}
BENCHMARK(BM_MaxDisplacementMatching)->Arg(32)->Arg(128);

void BM_MazurModulus(benchmark::State& state) {
  const SphereMap phi = mazur(4.0, 2.0, 16);
  for (auto _ : state)
    benchmark::DoNotOptimize(estimate_modulus(phi, Sampler::near_pairs, state.range(0), 1).violations);
}
BENCHMARK(BM_MazurModulus)->Arg(1000)->Arg(10000);

}  // namespace
BENCHMARK_MAIN();
