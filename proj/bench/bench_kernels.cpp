#include <benchmark/benchmark.h>

#include <vector>

#include "contagion/cascade.hpp"
#include "contagion/generators.hpp"
#include "contagion/measures.hpp"
#include "contagion/rng.hpp"

using namespace contagion;

namespace {

const FinancialNetwork& network() {
  static const FinancialNetwork net = [] {
    BlanchardSpec spec;
    ExposureSpec ex;
    ex.gamma_min = 0.3;
    return attach_exposures_and_capital(blanchard_graph(spec, 1), ex, 1);
  }();
  return net;
}

const std::vector<std::vector<NodeId>>& seed_sets() {
  static const std::vector<std::vector<NodeId>> sets = [] {
    std::vector<std::vector<NodeId>> s;
    for (std::uint64_t t = 0; t < 64; ++t) s.push_back(choose_seeds(network().size(), 0.001, t));
    return s;
  }();
  return sets;
}

MeasureOptions options() {
  MeasureOptions o;
  o.perm_budget = 200;
  o.seed = 1;
  return o;
}

void BM_MeasuresSerial(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(empirical_measures_serial(network(), options()));
}

void BM_MeasuresParallel(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(empirical_measures(network(), options()));
}

void BM_CascadeSizesSerial(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(cascade_sizes_serial(network(), seed_sets()));
}

void BM_CascadeSizesParallel(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(cascade_sizes(network(), seed_sets()));
}

}  // namespace

BENCHMARK(BM_MeasuresSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MeasuresParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CascadeSizesSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CascadeSizesParallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
