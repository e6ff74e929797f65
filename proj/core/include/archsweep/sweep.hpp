#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "archsweep/archspace.hpp"
#include "archsweep/data.hpp"

namespace archsweep {

struct SweepConfig {
  SpaceBounds bounds;
  TrainConfig train;  // train.seed is the sweep-global seed
  int top_m = 40;
  int parallelism = 1;
};

void validate(const SweepConfig& cfg);

struct SweepRecord {
  std::string label;
  ArchFeatures features;
  bool diverged = false;
  double mae_pct = 0.0;  // NaN when diverged
  double sse = 0.0;      // NaN when diverged
  std::int64_t train_millis = 0;
  std::uint64_t arch_seed = 0;
};

// Seeds derive from the label, not the execution order, so records never
// perturb each other.
std::uint64_t arch_seed_for(std::uint64_t global_seed, std::string_view label);

// Trains every architecture in cfg.bounds on ds. Records come back in
// enumeration order and are bit-identical for any parallelism level.
std::vector<SweepRecord> run_sweep(const SweepConfig& cfg, const Dataset& ds);

struct RankedRecord {
  SweepRecord record;
  double rel_assert_pct = 0.0;  // (mae / best mae - 1) * 100
};

struct RankedReport {
  std::vector<RankedRecord> ranked;    // ascending mae_pct, ties by label
  std::vector<SweepRecord> diverged;   // excluded from ranking, label order
};

RankedReport rank(std::span<const SweepRecord> records);

// First m ranked records; m must not exceed the ranking.
std::span<const RankedRecord> top_m(const RankedReport& report, int m);

// Serialized ranking, the analysis input contract. Ranked rows first
// (rank 1..R), then diverged rows with rank 0 and NaN metrics.
struct SweepCsvRow {
  int rank = 0;
  std::string label;
  ArchFeatures features;
  double mae_pct = 0.0;
  double sse = 0.0;
  double rel_assert_pct = 0.0;
  std::int64_t train_millis = 0;
  std::uint64_t arch_seed = 0;
  bool diverged = false;
};

std::string sweep_csv_header();

// with_timing=false zeroes train_millis so reruns serialize byte-identically;
// wall time belongs in the run manifest instead.
std::string sweep_csv_string(const RankedReport& report, bool with_timing);
void write_sweep_csv(const RankedReport& report, const std::string& path, bool with_timing);

std::vector<SweepCsvRow> parse_sweep_csv(std::span<const std::string> lines);
std::vector<SweepCsvRow> read_sweep_csv(const std::string& path);

}  // namespace archsweep
