// Throughput of sampling, hull tests and graph construction.

#include <benchmark/benchmark.h>

#include <vector>

#include "nne/campaign.hpp"
#include "nne/functionals.hpp"
#include "nne/graph.hpp"
#include "nne/hull.hpp"
#include "nne/sampling.hpp"

using namespace nne;

namespace {

Space space_of(const benchmark::State& state) {
  return Space(state.range(0) ? SpaceKind::Hyperbolic : SpaceKind::Euclidean, static_cast<int>(state.range(1)));
}

// Args: hyperbolic flag, dimension, radius x 10.
void BM_SamplePoisson(benchmark::State& state) {
  const Space sp = space_of(state);
  const double radius = static_cast<double>(state.range(2)) / 10.0;
  std::uint64_t stream = 0;
  std::size_t points = 0;
  for (auto _ : state) {
    RandomStream rng(1, stream++);
    const auto config = sample_poisson_ball(sp, radius, rng);
    points += config.size();
    benchmark::DoNotOptimize(config.points.data());
  }
  state.counters["points/s"] = benchmark::Counter(static_cast<double>(points), benchmark::Counter::kIsRate);
}
BENCHMARK(BM_SamplePoisson)->Args({0, 2, 180})->Args({0, 3, 80})->Args({1, 2, 90});

void BM_BuildNNE(benchmark::State& state) {
  const Space sp = space_of(state);
  RandomStream rng(2, 0);
  const auto config = sample_poisson_ball(sp, static_cast<double>(state.range(2)) / 10.0, rng);
  for (auto _ : state) {
    const auto g = build_nne(config);
    benchmark::DoNotOptimize(g.out_neighbors.data());
  }
  state.counters["points"] = static_cast<double>(config.size());
  state.counters["points/s"] = benchmark::Counter(static_cast<double>(config.size()) * state.iterations(),
                                                  benchmark::Counter::kIsRate);
}
BENCHMARK(BM_BuildNNE)->Args({0, 2, 180})->Args({0, 3, 80})->Args({1, 2, 70})->Args({1, 3, 35})
    ->Unit(benchmark::kMillisecond);

// Hull test on the directions from one vertex to its nearest neighbours.
void BM_HullContains(benchmark::State& state) {
  const Space sp(SpaceKind::Euclidean, static_cast<int>(state.range(0)));
  RandomStream rng(3, 0);
  const auto config = sample_poisson_ball(sp, 6.0, rng);
  const auto near = nearest_sorted(config, 0);
  std::vector<Point> pts;
  for (std::size_t j = 0; j < static_cast<std::size_t>(state.range(1)) && j < near.size(); ++j) {
    pts.push_back(config.points[near[j].index]);
  }
  for (auto _ : state) benchmark::DoNotOptimize(contains_in_hull(sp, config.points[0], pts));
}
BENCHMARK(BM_HullContains)->Args({2, 8})->Args({3, 12})->Args({4, 20});

void BM_StabilizationRadius(benchmark::State& state) {
  const Space sp(SpaceKind::Euclidean, 2);
  RandomStream rng(4, 0);
  const auto config = sample_poisson_ball(sp, 8.0, rng);
  const std::vector<double> dir{1.0, 0.0};
  const Point x = point_at(sp, 1.0, dir);
  for (auto _ : state) benchmark::DoNotOptimize(stabilization_radius(config, x).r);
}
BENCHMARK(BM_StabilizationRadius)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
