#include <benchmark/benchmark.h>

#include "archsweep/archspace.hpp"

namespace {

void BM_EnumerateSpace(benchmark::State& state) {
  const archsweep::SpaceBounds bounds{static_cast<int>(state.range(0)),
                                      static_cast<int>(state.range(1))};
  for (auto _ : state) {
    benchmark::DoNotOptimize(archsweep::enumerate_space(bounds));
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<std::int64_t>(archsweep::count_total(bounds)));
}
BENCHMARK(BM_EnumerateSpace)->Args({6, 5})->Args({10, 5});

void BM_PopulationFeatures(benchmark::State& state) {
  for (auto _ : state) {
    int inflection_sum = 0;
    archsweep::for_each_arch({6, 5}, [&](const archsweep::ArchSpec& spec) {
      inflection_sum += archsweep::features(spec).n_inflections;
    });
    benchmark::DoNotOptimize(inflection_sum);
  }
  state.SetItemsProcessed(state.iterations() * 9330);
}
BENCHMARK(BM_PopulationFeatures);

void BM_ParseLabel(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(archsweep::parse_label("6.4.6.4.6"));
  }
}
BENCHMARK(BM_ParseLabel);

}  // namespace

BENCHMARK_MAIN();
