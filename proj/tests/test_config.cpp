#include <cstdlib>
#include <filesystem>
#include <string>
#include <unistd.h>

#include "archsweep/csvio.hpp"
#include "archsweep/data.hpp"
#include "archsweep/runconfig.hpp"
#include "doctest.h"
#include "raises.hpp"

using namespace archsweep;
namespace fs = std::filesystem;

TEST_CASE("a full config document parses field for field") {
  const RunConfig cfg = parse_run_config(R"({
    "bounds": {"n_max": 4, "k_max": 3},
    "data": {"synthetic": {"seed": 9, "n_days": 500}},
    "ranges": {
      "train": {"first": "2013-01-01", "last": "2013-12-31"},
      "test": {"first": "2014-01-01", "last": "2014-06-30"}
    },
    "training": {"learning_rate": 0.1, "epochs": 50, "seed": 2},
    "top_m": 12,
    "parallelism": 3,
    "out": "results"
  })");
  CHECK(cfg.bounds.n_max == 4);
  CHECK(cfg.bounds.k_max == 3);
  REQUIRE(cfg.synthetic.has_value());
  CHECK_FALSE(cfg.csv.has_value());
  CHECK(cfg.synthetic->seed == 9);
  CHECK(cfg.synthetic->n_days == 500);
  CHECK(format_date(cfg.train_range.first) == "2013-01-01");
  CHECK(format_date(cfg.test_range.last) == "2014-06-30");
  CHECK(cfg.train.learning_rate == 0.1);
  CHECK(cfg.train.epochs == 50);
  CHECK(cfg.train.seed == 2);
  CHECK(cfg.top_m == 12);
  CHECK(cfg.parallelism == 3);
  CHECK(cfg.out_dir == "results");
}

TEST_CASE("omitted keys fall back to the documented defaults") {
  const RunConfig cfg = parse_run_config(R"({"data": {"synthetic": {}}})");
  CHECK(cfg.bounds.n_max == 6);
  CHECK(cfg.bounds.k_max == 5);
  CHECK(cfg.synthetic->seed == 1);
  CHECK(cfg.synthetic->n_days == 750);
  CHECK(format_date(cfg.train_range.first) == "2013-01-01");
  CHECK(format_date(cfg.train_range.last) == "2014-12-31");
  CHECK(format_date(cfg.test_range.first) == "2015-01-01");
  CHECK(format_date(cfg.test_range.last) == "2015-12-31");
  CHECK(cfg.train.epochs == 300);
  CHECK(cfg.train.learning_rate == 0.05);
  CHECK(cfg.train.seed == 1);
  CHECK(cfg.top_m == 40);
  CHECK(cfg.parallelism == 1);
  CHECK(cfg.out_dir == "out");
}

TEST_CASE("a csv data source needs all five series paths") {
  const RunConfig cfg = parse_run_config(R"({
    "data": {"csv": {"asset": "a.csv", "idiv": "b.csv", "sp500": "c.csv",
                     "icon": "d.csv", "ifnc": "e.csv"}}
  })");
  REQUIRE(cfg.csv.has_value());
  CHECK(cfg.csv->asset == "a.csv");
  CHECK(cfg.csv->ifnc == "e.csv");

  CHECK_RAISES_MSG(bad_config, "ifnc", parse_run_config(R"({
    "data": {"csv": {"asset": "a", "idiv": "b", "sp500": "c", "icon": "d"}}
  })"));
}

TEST_CASE("the data source must be exactly one of csv or synthetic") {
  CHECK_RAISES(bad_config, parse_run_config(R"({})"));
  CHECK_RAISES(bad_config, parse_run_config(R"({"data": {}})"));
  CHECK_RAISES(bad_config, parse_run_config(R"({
    "data": {"synthetic": {}, "csv": {"asset": "a", "idiv": "b", "sp500": "c",
                                      "icon": "d", "ifnc": "e"}}
  })"));
}

TEST_CASE("unknown keys are rejected at every level") {
  CHECK_RAISES_MSG(bad_config, "bogus",
                   parse_run_config(R"({"data": {"synthetic": {}}, "bogus": 1})"));
  CHECK_RAISES(bad_config,
               parse_run_config(R"({"data": {"synthetic": {}}, "bounds": {"n": 1}})"));
  CHECK_RAISES(bad_config,
               parse_run_config(R"({"data": {"synthetic": {"days": 5}}})"));
  CHECK_RAISES(bad_config, parse_run_config(
                               R"({"data": {"synthetic": {}}, "ranges": {"validate": {}}})"));
  CHECK_RAISES(bad_config,
               parse_run_config(R"({"data": {"synthetic": {}}, "training": {"lr": 0.1}})"));
}

TEST_CASE("malformed values are rejected with their config path") {
  CHECK_RAISES(bad_config, parse_run_config("not json"));
  CHECK_RAISES_MSG(bad_config, "top_m",
                   parse_run_config(R"({"data": {"synthetic": {}}, "top_m": "many"})"));
  CHECK_RAISES_MSG(bad_config, "n_max",
                   parse_run_config(R"({"data": {"synthetic": {}}, "bounds": {"n_max": 2.5}})"));
  CHECK_RAISES_MSG(bad_config, "seed",
                   parse_run_config(R"({"data": {"synthetic": {"seed": -3}}})"));
  CHECK_RAISES_MSG(bad_config, "first", parse_run_config(R"({
    "data": {"synthetic": {}},
    "ranges": {"train": {"first": "2013-13-40", "last": "2013-12-31"}}
  })"));
}

TEST_CASE("semantic validation runs after parsing") {
  CHECK_RAISES(bad_config,
               parse_run_config(R"({"data": {"synthetic": {"n_days": 10}}})"));
  CHECK_RAISES(bad_config,
               parse_run_config(R"({"data": {"synthetic": {}}, "bounds": {"n_max": 0}})"));
  CHECK_RAISES(bad_config,
               parse_run_config(R"({"data": {"synthetic": {}}, "top_m": 0})"));
  CHECK_RAISES(bad_config,
               parse_run_config(R"({"data": {"synthetic": {}}, "parallelism": 0})"));
  CHECK_RAISES(bad_config, parse_run_config(
                               R"({"data": {"synthetic": {}}, "training": {"epochs": 0}})"));
  CHECK_RAISES(bad_config, parse_run_config(
                               R"({"data": {"synthetic": {}}, "training": {"learning_rate": 0}})"));
  CHECK_RAISES(bad_config, parse_run_config(R"({"data": {"synthetic": {}}, "out": ""})"));
  // Inverted and overlapping windows.
  CHECK_RAISES_MSG(bad_config, "starts after", parse_run_config(R"({
    "data": {"synthetic": {}},
    "ranges": {"train": {"first": "2014-01-01", "last": "2013-01-01"}}
  })"));
  CHECK_RAISES_MSG(bad_config, "overlap", parse_run_config(R"({
    "data": {"synthetic": {}},
    "ranges": {"train": {"first": "2013-01-01", "last": "2015-06-30"}}
  })"));
}

TEST_CASE("canonical form ignores document key order and drives the hash") {
  const RunConfig a = parse_run_config(
      R"({"top_m": 7, "data": {"synthetic": {"seed": 3}}, "bounds": {"k_max": 2, "n_max": 3}})");
  const RunConfig b = parse_run_config(
      R"({"bounds": {"n_max": 3, "k_max": 2}, "data": {"synthetic": {"seed": 3}}, "top_m": 7})");
  CHECK(canonical_json(a) == canonical_json(b));
  CHECK(config_hash_hex(a) == config_hash_hex(b));
  CHECK(config_hash_hex(a).size() == 16);
  CHECK(config_hash_hex(a).find_first_not_of("0123456789abcdef") == std::string::npos);

  RunConfig c = a;
  c.parallelism = 8;
  CHECK(config_hash_hex(c) != config_hash_hex(a));
}

TEST_CASE("load_run_config reads from disk and load_dataset materializes") {
  const fs::path dir = fs::temp_directory_path() /
                       ("archsweep_test_config_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const fs::path path = dir / "run.json";
  write_text_file(path.string(), R"({
    "data": {"synthetic": {"seed": 5, "n_days": 200}},
    "ranges": {
      "train": {"first": "2013-01-01", "last": "2013-06-30"},
      "test": {"first": "2013-07-01", "last": "2013-12-31"}
    }
  })");
  const RunConfig cfg = load_run_config(path.string());
  CHECK(cfg.synthetic->seed == 5);

  const Dataset ds = load_dataset(cfg);
  CHECK(ds.train.size() > 100);
  CHECK(ds.test.size() > 50);

  CHECK_RAISES(io_error, load_run_config((dir / "missing.json").string()));

  // The csv source loads the same series it would synthesize.
  const SyntheticData synth = synthesize(5, 200);
  write_price_csv(synth.asset, (dir / "asset.csv").string());
  write_price_csv(synth.indices[0], (dir / "idiv.csv").string());
  write_price_csv(synth.indices[1], (dir / "sp500.csv").string());
  write_price_csv(synth.indices[2], (dir / "icon.csv").string());
  write_price_csv(synth.indices[3], (dir / "ifnc.csv").string());
  RunConfig from_csv = cfg;
  from_csv.synthetic.reset();
  CsvSourceConfig src;
  src.asset = (dir / "asset.csv").string();
  src.idiv = (dir / "idiv.csv").string();
  src.sp500 = (dir / "sp500.csv").string();
  src.icon = (dir / "icon.csv").string();
  src.ifnc = (dir / "ifnc.csv").string();
  from_csv.csv = src;
  const Dataset ds2 = load_dataset(from_csv);
  REQUIRE(ds2.train.size() == ds.train.size());
  for (std::size_t i = 0; i < ds.train.size(); ++i) {
    CHECK(ds2.train[i].y == ds.train[i].y);
    CHECK(ds2.train[i].x == ds.train[i].x);
  }
  fs::remove_all(dir);
}
