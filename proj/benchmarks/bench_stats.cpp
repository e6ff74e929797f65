#include <benchmark/benchmark.h>

#include <vector>

#include "archsweep/archspace.hpp"
#include "archsweep/rng.hpp"
#include "archsweep/stats.hpp"

namespace {

void BM_BinomPmf(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(archsweep::binom_pmf(14, 40, 0.3588));
  }
}
BENCHMARK(BM_BinomPmf);

void BM_BinomTwoSided(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(archsweep::binom_two_sided_p(14, 40, 0.3588));
  }
}
BENCHMARK(BM_BinomTwoSided);

void BM_StudentTQuantile(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(archsweep::student_t_quantile(0.975, 37));
  }
}
BENCHMARK(BM_StudentTQuantile);

// Population-scale regression: the five features of every (6,5) architecture
// against a synthetic response, the shape of the analysis stage's fit.
void BM_PopulationOls(benchmark::State& state) {
  std::vector<archsweep::Column> cols = {{"n_layers", {}},
                                         {"n_neurons", {}},
                                         {"std_neurons", {}},
                                         {"n_inflections", {}}};
  std::vector<double> y;
  archsweep::SplitMix64 rng(99);
  archsweep::for_each_arch({6, 5}, [&](const archsweep::ArchSpec& spec) {
    const archsweep::ArchFeatures f = archsweep::features(spec);
    cols[0].values.push_back(f.n_layers);
    cols[1].values.push_back(f.n_neurons);
    cols[2].values.push_back(f.std_neurons);
    cols[3].values.push_back(f.n_inflections);
    y.push_back(0.02 * f.n_neurons + rng.next_uniform(-0.1, 0.1));
  });
  for (auto _ : state) {
    benchmark::DoNotOptimize(archsweep::ols(cols, y, true));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(y.size()));
}
BENCHMARK(BM_PopulationOls);

void BM_CorrMatrix(benchmark::State& state) {
  std::vector<archsweep::Column> cols(6);
  archsweep::SplitMix64 rng(7);
  for (std::size_t j = 0; j < cols.size(); ++j) {
    cols[j].name = "c" + std::to_string(j);
    for (int i = 0; i < 9330; ++i) cols[j].values.push_back(rng.next_uniform(-1.0, 1.0));
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(archsweep::corr_matrix(cols));
  }
}
BENCHMARK(BM_CorrMatrix);

}  // namespace
