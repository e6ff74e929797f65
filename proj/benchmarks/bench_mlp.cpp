#include <benchmark/benchmark.h>

#include "archsweep/data.hpp"
#include "archsweep/mlp.hpp"
#include "archsweep/rng.hpp"
#include "archsweep/sweep.hpp"

namespace {

archsweep::Batch make_batch(int n, int dim, std::uint64_t seed) {
  archsweep::SplitMix64 rng(seed);
  archsweep::Batch batch;
  batch.dim = dim;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < dim; ++j) batch.x.push_back(rng.next_uniform(-1.0, 1.0));
    batch.y.push_back(rng.next_uniform(-0.05, 0.05));
  }
  return batch;
}

void BM_Forward(benchmark::State& state) {
  const archsweep::Network net = archsweep::init(archsweep::parse_label("6.6.6.6.6"), 5, 1);
  const archsweep::Batch batch = make_batch(1, 5, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(archsweep::forward(net, batch.row(0)));
  }
}
BENCHMARK(BM_Forward);

void BM_Gradient(benchmark::State& state) {
  const archsweep::Network net = archsweep::init(archsweep::parse_label("6.6.6.6.6"), 5, 1);
  const archsweep::Batch batch = make_batch(static_cast<int>(state.range(0)), 5, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(archsweep::gradient(net, batch));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Gradient)->Arg(64)->Arg(480);

void BM_TrainOneArch(benchmark::State& state) {
  const archsweep::Batch batch = make_batch(480, 5, 3);
  archsweep::TrainConfig cfg;
  cfg.epochs = static_cast<int>(state.range(0));
  for (auto _ : state) {
    archsweep::Network net = archsweep::init(archsweep::parse_label("6.4.2"), 5, 1);
    benchmark::DoNotOptimize(archsweep::train(std::move(net), batch, cfg));
  }
}
BENCHMARK(BM_TrainOneArch)->Arg(50)->Arg(300)->Unit(benchmark::kMillisecond);

// The full desk-scale pipeline stage: every (3,3) architecture trained and
// ranked on two years of synthetic data.
void BM_SweepSmallSpace(benchmark::State& state) {
  const archsweep::SyntheticData synth = archsweep::synthesize(11, 750);
  const std::vector<archsweep::PriceSeries> indices(synth.indices.begin(), synth.indices.end());
  const archsweep::Dataset ds = archsweep::build_dataset(
      synth.asset, indices,
      {archsweep::parse_date("2013-01-01"), archsweep::parse_date("2014-12-31")},
      {archsweep::parse_date("2015-01-01"), archsweep::parse_date("2015-12-31")});
  archsweep::SweepConfig cfg;
  cfg.bounds = {3, 3};
  cfg.parallelism = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(archsweep::run_sweep(cfg, ds));
  }
  state.SetItemsProcessed(state.iterations() * 39);
}
BENCHMARK(BM_SweepSmallSpace)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace
