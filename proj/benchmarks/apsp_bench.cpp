#include <random>

#include <benchmark/benchmark.h>

#include "fixtures.hpp"
#include "gvipath/routing.hpp"

namespace {

using namespace gvipath;

WeightedGraph dense_graph(std::size_t n) {
  std::mt19937_64 rng(n);
  return testing::random_graph({.n = n, .edge_probability = 0.5, .integer_gvi = true}, rng);
}

void BM_FloydWarshallNaive(benchmark::State& state) {
  const auto graph = dense_graph(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(floyd_warshall(graph));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_FloydWarshallNaive)->RangeMultiplier(2)->Range(128, 1024)->Unit(benchmark::kMillisecond);

void BM_FloydWarshallBlocked(benchmark::State& state) {
  const auto graph = dense_graph(static_cast<std::size_t>(state.range(0)));
  const auto block = static_cast<std::size_t>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(floyd_warshall_blocked(graph, block));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_FloydWarshallBlocked)
    ->ArgsProduct({{128, 256, 512, 1024}, {32, 64, 128}})
    ->Unit(benchmark::kMillisecond);

void BM_Dijkstra(benchmark::State& state) {
  const auto graph = dense_graph(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(dijkstra(graph, 0));
}
BENCHMARK(BM_Dijkstra)->RangeMultiplier(2)->Range(128, 1024)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
