#include <benchmark/benchmark.h>

#include "sparsalloc/allocator.hpp"
#include "sparsalloc/linalg.hpp"
#include "sparsalloc/netmodel.hpp"
#include "sparsalloc/pruner.hpp"
#include "sparsalloc/search.hpp"

using namespace sparsalloc;

static void BM_Matmul(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  auto a = generate_calibration(n, n, 1).x0;
  auto b = generate_calibration(n, n, 2).x0;
  for (auto _ : state) benchmark::DoNotOptimize(matmul(a, b));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Matmul)->RangeMultiplier(2)->Range(16, 256)->Complexity(benchmark::oNCubed);

static void BM_SigmaMin(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  auto m = generate_calibration(n, n, 3).x0;
  for (auto _ : state) benchmark::DoNotOptimize(sigma_min(m));
}
BENCHMARK(BM_SigmaMin)->RangeMultiplier(2)->Range(16, 128);

static void BM_PruneNet(benchmark::State& state) {
  const auto layers = static_cast<std::size_t>(state.range(0));
  auto net = generate_net(layers, std::vector<std::size_t>(layers + 1, 64), Activation::Linear, 4);
  auto calib = generate_calibration(64, 128, 5);
  auto profile = allocate_arithmetic(0.7, layers, 0.5 * beta_upper_bound(0.7, layers));
  for (auto _ : state) benchmark::DoNotOptimize(prune_net(net, calib, profile, PruneMethod::wanda()));
}
BENCHMARK(BM_PruneNet)->Arg(8)->Arg(32);

static void BM_GridSearch(benchmark::State& state) {
  auto net = generate_net(32, std::vector<std::size_t>(33, 64), Activation::Linear, 6);
  auto calib = generate_calibration(64, 128, 7);
  for (auto _ : state) benchmark::DoNotOptimize(grid_search_beta(net, calib, 0.7, 0.002));
}
BENCHMARK(BM_GridSearch)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
