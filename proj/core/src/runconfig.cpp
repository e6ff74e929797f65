#include "archsweep/runconfig.hpp"

#include <array>
#include <cstdio>
#include <initializer_list>
#include <limits>

#include "archsweep/csvio.hpp"
#include "archsweep/error.hpp"
#include "archsweep/rng.hpp"
#include "json.hpp"

namespace archsweep {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

void expect_keys(const json& obj, const std::string& ctx,
                 std::initializer_list<const char*> keys) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* key : keys) {
      if (it.key() == key) {
        known = true;
        break;
      }
    }
    if (!known) raise(errc::bad_config, ctx + ": unknown key \"" + it.key() + "\"");
  }
}

const json* find(const json& obj, const char* key) {
  const auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

const json& require_object(const json& v, const std::string& ctx) {
  if (!v.is_object()) raise(errc::bad_config, ctx + " must be an object");
  return v;
}

int as_int(const json& v, const std::string& ctx) {
  if (v.is_number_unsigned() &&
      v.get<std::uint64_t>() > static_cast<std::uint64_t>(std::numeric_limits<int>::max())) {
    raise(errc::bad_config, ctx + " is out of range");
  }
  if (!v.is_number_integer()) raise(errc::bad_config, ctx + " must be an integer");
  const auto wide = v.get<std::int64_t>();
  if (wide < std::numeric_limits<int>::min() || wide > std::numeric_limits<int>::max()) {
    raise(errc::bad_config, ctx + " is out of range");
  }
  return static_cast<int>(wide);
}

std::uint64_t as_uint64(const json& v, const std::string& ctx) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<std::int64_t>() >= 0) {
    return static_cast<std::uint64_t>(v.get<std::int64_t>());
  }
  raise(errc::bad_config, ctx + " must be a non-negative integer");
}

double as_double(const json& v, const std::string& ctx) {
  if (!v.is_number()) raise(errc::bad_config, ctx + " must be a number");
  return v.get<double>();
}

std::string as_string(const json& v, const std::string& ctx) {
  if (!v.is_string()) raise(errc::bad_config, ctx + " must be a string");
  return v.get<std::string>();
}

Date as_date(const json& v, const std::string& ctx) {
  const std::string text = as_string(v, ctx);
  try {
    return parse_date(text);
  } catch (const Error& e) {
    raise(errc::bad_config, ctx + ": " + e.message());
  }
}

DateRange parse_range(const json& v, const std::string& ctx, DateRange fallback) {
  require_object(v, ctx);
  expect_keys(v, ctx, {"first", "last"});
  DateRange range = fallback;
  if (const json* first = find(v, "first")) range.first = as_date(*first, ctx + ".first");
  if (const json* last = find(v, "last")) range.last = as_date(*last, ctx + ".last");
  return range;
}

}  // namespace

RunConfig parse_run_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    raise(errc::bad_config, std::string("config: ") + e.what());
  }
  require_object(root, "config");
  expect_keys(root, "config",
              {"bounds", "data", "ranges", "training", "top_m", "parallelism", "out"});

  RunConfig cfg;
  if (const json* bounds = find(root, "bounds")) {
    require_object(*bounds, "bounds");
    expect_keys(*bounds, "bounds", {"n_max", "k_max"});
    if (const json* v = find(*bounds, "n_max")) cfg.bounds.n_max = as_int(*v, "bounds.n_max");
    if (const json* v = find(*bounds, "k_max")) cfg.bounds.k_max = as_int(*v, "bounds.k_max");
  }

  const json* data = find(root, "data");
  if (data == nullptr) raise(errc::bad_config, "config: missing required key \"data\"");
  require_object(*data, "data");
  expect_keys(*data, "data", {"csv", "synthetic"});
  const json* csv = find(*data, "csv");
  const json* synthetic = find(*data, "synthetic");
  if ((csv != nullptr) == (synthetic != nullptr)) {
    raise(errc::bad_config, "data: exactly one of \"csv\" or \"synthetic\" must be given");
  }
  if (csv != nullptr) {
    require_object(*csv, "data.csv");
    expect_keys(*csv, "data.csv", {"asset", "idiv", "sp500", "icon", "ifnc"});
    CsvSourceConfig src;
    const std::array<std::pair<const char*, std::string*>, 5> fields = {
        std::pair{"asset", &src.asset}, std::pair{"idiv", &src.idiv},
        std::pair{"sp500", &src.sp500}, std::pair{"icon", &src.icon},
        std::pair{"ifnc", &src.ifnc}};
    for (const auto& [key, slot] : fields) {
      const json* v = find(*csv, key);
      if (v == nullptr) {
        raise(errc::bad_config, std::string("data.csv: missing key \"") + key + "\"");
      }
      *slot = as_string(*v, std::string("data.csv.") + key);
    }
    cfg.csv = std::move(src);
  } else {
    require_object(*synthetic, "data.synthetic");
    expect_keys(*synthetic, "data.synthetic", {"seed", "n_days"});
    SyntheticSourceConfig src;
    if (const json* v = find(*synthetic, "seed")) src.seed = as_uint64(*v, "data.synthetic.seed");
    if (const json* v = find(*synthetic, "n_days")) src.n_days = as_int(*v, "data.synthetic.n_days");
    cfg.synthetic = src;
  }

  if (const json* ranges = find(root, "ranges")) {
    require_object(*ranges, "ranges");
    expect_keys(*ranges, "ranges", {"train", "test"});
    if (const json* v = find(*ranges, "train")) {
      cfg.train_range = parse_range(*v, "ranges.train", cfg.train_range);
    }
    if (const json* v = find(*ranges, "test")) {
      cfg.test_range = parse_range(*v, "ranges.test", cfg.test_range);
    }
  }

  if (const json* training = find(root, "training")) {
    require_object(*training, "training");
    expect_keys(*training, "training", {"learning_rate", "epochs", "seed"});
    if (const json* v = find(*training, "learning_rate")) {
      cfg.train.learning_rate = as_double(*v, "training.learning_rate");
    }
    if (const json* v = find(*training, "epochs")) cfg.train.epochs = as_int(*v, "training.epochs");
    if (const json* v = find(*training, "seed")) cfg.train.seed = as_uint64(*v, "training.seed");
  }

  if (const json* v = find(root, "top_m")) cfg.top_m = as_int(*v, "top_m");
  if (const json* v = find(root, "parallelism")) cfg.parallelism = as_int(*v, "parallelism");
  if (const json* v = find(root, "out")) cfg.out_dir = as_string(*v, "out");

  validate(cfg);
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  return parse_run_config(read_text_file(path));
}

void validate(const RunConfig& cfg) {
  if (cfg.bounds.n_max < 1) raise(errc::bad_config, "bounds.n_max must be >= 1");
  if (cfg.bounds.k_max < 1) raise(errc::bad_config, "bounds.k_max must be >= 1");
  if ((cfg.csv.has_value()) == (cfg.synthetic.has_value())) {
    raise(errc::bad_config, "exactly one data source must be configured");
  }
  if (cfg.synthetic && cfg.synthetic->n_days < 30) {
    raise(errc::bad_config, "data.synthetic.n_days must be >= 30");
  }
  using std::chrono::sys_days;
  for (const auto& [range, name] :
       {std::pair{&cfg.train_range, "train"}, std::pair{&cfg.test_range, "test"}}) {
    if (sys_days{range->first} > sys_days{range->last}) {
      raise(errc::bad_config, std::string("ranges.") + name + " starts after it ends");
    }
  }
  const bool disjoint = sys_days{cfg.train_range.last} < sys_days{cfg.test_range.first} ||
                        sys_days{cfg.test_range.last} < sys_days{cfg.train_range.first};
  if (!disjoint) raise(errc::bad_config, "train and test ranges overlap");
  if (cfg.train.epochs < 1) raise(errc::bad_config, "training.epochs must be >= 1");
  if (!(cfg.train.learning_rate > 0.0)) {
    raise(errc::bad_config, "training.learning_rate must be > 0");
  }
  if (cfg.top_m < 1) raise(errc::bad_config, "top_m must be >= 1");
  if (cfg.parallelism < 1) raise(errc::bad_config, "parallelism must be >= 1");
  if (cfg.out_dir.empty()) raise(errc::bad_config, "out must not be empty");
}

std::string canonical_json(const RunConfig& cfg) {
  ordered_json j;
  j["bounds"] = {{"n_max", cfg.bounds.n_max}, {"k_max", cfg.bounds.k_max}};
  if (cfg.csv) {
    j["data"] = {{"csv",
                  {{"asset", cfg.csv->asset},
                   {"idiv", cfg.csv->idiv},
                   {"sp500", cfg.csv->sp500},
                   {"icon", cfg.csv->icon},
                   {"ifnc", cfg.csv->ifnc}}}};
  } else {
    j["data"] = {{"synthetic", {{"seed", cfg.synthetic->seed}, {"n_days", cfg.synthetic->n_days}}}};
  }
  j["ranges"] = {
      {"train",
       {{"first", format_date(cfg.train_range.first)}, {"last", format_date(cfg.train_range.last)}}},
      {"test",
       {{"first", format_date(cfg.test_range.first)}, {"last", format_date(cfg.test_range.last)}}}};
  j["training"] = {{"learning_rate", cfg.train.learning_rate},
                   {"epochs", cfg.train.epochs},
                   {"seed", cfg.train.seed}};
  j["top_m"] = cfg.top_m;
  j["parallelism"] = cfg.parallelism;
  j["out"] = cfg.out_dir;
  return j.dump();
}

std::string config_hash_hex(const RunConfig& cfg) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a64(canonical_json(cfg))));
  return buf;
}

Dataset load_dataset(const RunConfig& cfg) {
  if (cfg.synthetic) {
    const SyntheticData synth = synthesize(cfg.synthetic->seed, cfg.synthetic->n_days);
    return build_dataset(synth.asset, synth.indices, cfg.train_range, cfg.test_range);
  }
  const CsvSourceConfig& src = *cfg.csv;
  const PriceSeries asset = load_price_csv(src.asset, "asset");
  const std::array<PriceSeries, 4> indices = {
      load_price_csv(src.idiv, "idiv"), load_price_csv(src.sp500, "sp500"),
      load_price_csv(src.icon, "icon"), load_price_csv(src.ifnc, "ifnc")};
  return build_dataset(asset, indices, cfg.train_range, cfg.test_range);
}

}  // namespace archsweep
