// Serial reference kernels against their OpenMP versions.
#include <benchmark/benchmark.h>

#include <map>

#include "fairstream/oracle.hpp"
#include "fairstream/planted.hpp"
#include "fairstream/radius_ladder.hpp"

using namespace fairstream;

namespace {

const PlantedDataset& dataset(int n) {
  static std::map<int, PlantedDataset> cache;
  auto it = cache.find(n);
  if (it == cache.end()) {
    PlantedOptions opt;
    opt.n = n;
    opt.seed = 42;
    it = cache.emplace(n, generate_planted(FairnessSpec({30, 20}), opt)).first;
  }
  return it->second;
}

void BM_cost_parallel(benchmark::State& state) {
  const auto& d = dataset(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(clustering_cost(d.points, d.planted_centers));
}

void BM_cost_serial(benchmark::State& state) {
  const auto& d = dataset(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(serial::clustering_cost(d.points, d.planted_centers));
}

void BM_gonzalez_parallel(benchmark::State& state) {
  const auto& d = dataset(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(gonzalez(d.points, 50));
}

void BM_gonzalez_serial(benchmark::State& state) {
  const auto& d = dataset(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(serial::gonzalez(d.points, 50));
}

std::vector<Point> small_instance() {
  PlantedOptions opt;
  opt.n = 14;
  opt.seed = 3;
  return generate_planted(FairnessSpec({3, 2}), opt).points;
}

void BM_oracle_parallel(benchmark::State& state) {
  const auto pts = small_instance();
  for (auto _ : state) benchmark::DoNotOptimize(brute_force_opt(pts, FairnessSpec({3, 2})));
}

void BM_oracle_serial(benchmark::State& state) {
  const auto pts = small_instance();
  for (auto _ : state) benchmark::DoNotOptimize(serial::brute_force_opt(pts, FairnessSpec({3, 2})));
}

void ladder(benchmark::State& state, bool parallel) {
  const auto& d = dataset(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    Ladder l(FairnessSpec({30, 20}), {0.1, SolverMode::general, parallel});
    l.observe_batch(d.points);
    benchmark::DoNotOptimize(l.finish());
  }
}

void BM_ladder_parallel(benchmark::State& state) { ladder(state, true); }
void BM_ladder_serial(benchmark::State& state) { ladder(state, false); }

}  // namespace

BENCHMARK(BM_cost_parallel)->Arg(10000)->Arg(100000);
BENCHMARK(BM_cost_serial)->Arg(10000)->Arg(100000);
BENCHMARK(BM_gonzalez_parallel)->Arg(10000);
BENCHMARK(BM_gonzalez_serial)->Arg(10000);
BENCHMARK(BM_oracle_parallel);
BENCHMARK(BM_oracle_serial);
BENCHMARK(BM_ladder_parallel)->Arg(4000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ladder_serial)->Arg(4000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
