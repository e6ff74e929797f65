#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "archsweep/archspace.hpp"
#include "archsweep/data.hpp"

namespace archsweep {

struct CsvSourceConfig {
  std::string asset;
  std::string idiv;
  std::string sp500;
  std::string icon;
  std::string ifnc;
};

struct SyntheticSourceConfig {
  std::uint64_t seed = 1;
  int n_days = 750;
};

// One JSON document describes a full run; see docs/config.schema.json.
struct RunConfig {
  SpaceBounds bounds{6, 5};
  // Exactly one source is set.
  std::optional<CsvSourceConfig> csv;
  std::optional<SyntheticSourceConfig> synthetic;
  DateRange train_range{Date{std::chrono::year{2013}, std::chrono::month{1}, std::chrono::day{1}},
                        Date{std::chrono::year{2014}, std::chrono::month{12}, std::chrono::day{31}}};
  DateRange test_range{Date{std::chrono::year{2015}, std::chrono::month{1}, std::chrono::day{1}},
                       Date{std::chrono::year{2015}, std::chrono::month{12}, std::chrono::day{31}}};
  TrainConfig train{300, 0.05, 1};
  int top_m = 40;
  int parallelism = 1;
  std::string out_dir = "out";
};

// Strict parse: unknown keys are rejected at every level, "data" is
// required, everything else falls back to the defaults above.
RunConfig parse_run_config(const std::string& json_text);
RunConfig load_run_config(const std::string& path);

// Semantic checks shared by parse and by flag overrides.
void validate(const RunConfig& cfg);

// Fixed-order single-line JSON with all defaults materialized; the hash
// input, so equal configs hash equally regardless of input formatting.
std::string canonical_json(const RunConfig& cfg);
std::string config_hash_hex(const RunConfig& cfg);

// Materializes the configured source and builds the aligned dataset.
Dataset load_dataset(const RunConfig& cfg);

}  // namespace archsweep
