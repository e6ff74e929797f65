#include "archsweep/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "archsweep/csvio.hpp"
#include "archsweep/error.hpp"
#include "archsweep/mlp.hpp"
#include "archsweep/rng.hpp"

namespace archsweep {

void validate(const SweepConfig& cfg) {
  validate_bounds(cfg.bounds);
  validate(cfg.train);
  if (cfg.top_m < 1) raise(errc::usage, "top_m must be >= 1, got " + std::to_string(cfg.top_m));
  const std::uint64_t total = count_total(cfg.bounds);
  if (static_cast<std::uint64_t>(cfg.top_m) > total) {
    raise(errc::usage, "top_m " + std::to_string(cfg.top_m) + " exceeds the population of " +
                           std::to_string(total));
  }
  if (cfg.parallelism < 1) {
    raise(errc::usage, "parallelism must be >= 1, got " + std::to_string(cfg.parallelism));
  }
}

std::uint64_t arch_seed_for(std::uint64_t global_seed, std::string_view label) {
  return splitmix64(global_seed ^ fnv1a64(label));
}

namespace {

SweepRecord train_one(const ArchSpec& spec, const TrainConfig& cfg, const Batch& train_set,
                      const Batch& test_set) {
  SweepRecord rec;
  rec.label = format_label(spec);
  rec.features = features(spec);
  rec.arch_seed = arch_seed_for(cfg.seed, rec.label);

  const auto started = std::chrono::steady_clock::now();
  try {
    Network net = init(spec, train_set.dim, rec.arch_seed);
    TrainResult trained = train(std::move(net), train_set, cfg);
    const EvalMetrics metrics = evaluate(trained.net, test_set);
    if (!std::isfinite(metrics.mae_pct) || !std::isfinite(metrics.sse)) {
      raise(errc::diverged_training, "non-finite test metrics");
    }
    rec.mae_pct = metrics.mae_pct;
    rec.sse = metrics.sse;
  } catch (const Error& e) {
    if (e.code() != errc::diverged_training) throw;
    rec.diverged = true;
    rec.mae_pct = std::numeric_limits<double>::quiet_NaN();
    rec.sse = std::numeric_limits<double>::quiet_NaN();
  }
  rec.train_millis = std::chrono::duration_cast<std::chrono::milliseconds>(
                         std::chrono::steady_clock::now() - started)
                         .count();
  return rec;
}

}  // namespace

std::vector<SweepRecord> run_sweep(const SweepConfig& cfg, const Dataset& ds) {
  validate(cfg);
  if (ds.train.empty() || ds.test.empty()) {
    raise(errc::insufficient_data, "dataset has an empty split");
  }
  const std::vector<ArchSpec> specs = enumerate_space(cfg.bounds);
  const Batch train_set = to_batch(ds.train);
  const Batch test_set = to_batch(ds.test);

  // Workers claim enumeration indices and write into pre-sized slots, so the
  // result order never depends on scheduling.
  std::vector<SweepRecord> records(specs.size());
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr first_error;
  std::mutex error_mutex;

  const auto worker = [&]() {
    for (;;) {
      if (failed.load(std::memory_order_relaxed)) return;
      const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= specs.size()) return;
      try {
        records[i] = train_one(specs[i], cfg.train, train_set, test_set);
      } catch (...) {
        const std::scoped_lock lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        failed.store(true, std::memory_order_relaxed);
        return;
      }
    }
  };

  const auto n_workers =
      std::min(static_cast<std::size_t>(cfg.parallelism), specs.size());
  if (n_workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (std::size_t t = 0; t < n_workers; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (first_error) std::rethrow_exception(first_error);
  return records;
}

RankedReport rank(std::span<const SweepRecord> records) {
  if (records.empty()) raise(errc::empty_input, "no records to rank");
  RankedReport report;
  for (const SweepRecord& rec : records) {
    if (rec.diverged) {
      report.diverged.push_back(rec);
    } else {
      report.ranked.push_back({rec, 0.0});
    }
  }
  if (report.ranked.empty()) {
    raise(errc::diverged_training,
          "all " + std::to_string(records.size()) + " trainings diverged");
  }
  std::sort(report.ranked.begin(), report.ranked.end(),
            [](const RankedRecord& a, const RankedRecord& b) {
              if (a.record.mae_pct != b.record.mae_pct) return a.record.mae_pct < b.record.mae_pct;
              return a.record.label < b.record.label;
            });
  std::sort(report.diverged.begin(), report.diverged.end(),
            [](const SweepRecord& a, const SweepRecord& b) { return a.label < b.label; });

  const double best = report.ranked.front().record.mae_pct;
  for (RankedRecord& rr : report.ranked) {
    rr.rel_assert_pct =
        rr.record.mae_pct == best ? 0.0 : (rr.record.mae_pct / best - 1.0) * 100.0;
  }
  return report;
}

std::span<const RankedRecord> top_m(const RankedReport& report, int m) {
  if (m < 1) raise(errc::usage, "top_m must be >= 1, got " + std::to_string(m));
  if (static_cast<std::size_t>(m) > report.ranked.size()) {
    raise(errc::usage, "top_m " + std::to_string(m) + " exceeds the " +
                           std::to_string(report.ranked.size()) + " ranked records");
  }
  return std::span<const RankedRecord>(report.ranked).first(static_cast<std::size_t>(m));
}

std::string sweep_csv_header() {
  return "rank,label,n_layers,n_neurons,mean_neurons,std_neurons,n_inflections,"
         "mae_pct,sse,rel_assert_pct,train_millis,arch_seed,diverged";
}

namespace {

void append_row(std::string& out, int rank, const SweepRecord& rec, double rel_assert_pct,
                bool with_timing) {
  out += std::to_string(rank);
  out.push_back(',');
  out += rec.label;
  out.push_back(',');
  out += std::to_string(rec.features.n_layers);
  out.push_back(',');
  out += std::to_string(rec.features.n_neurons);
  out.push_back(',');
  out += format_double(rec.features.mean_neurons);
  out.push_back(',');
  out += format_double(rec.features.std_neurons);
  out.push_back(',');
  out += std::to_string(rec.features.n_inflections);
  out.push_back(',');
  out += format_double(rec.mae_pct);
  out.push_back(',');
  out += format_double(rec.sse);
  out.push_back(',');
  out += format_double(rel_assert_pct);
  out.push_back(',');
  out += std::to_string(with_timing ? rec.train_millis : 0);
  out.push_back(',');
  out += std::to_string(rec.arch_seed);
  out.push_back(',');
  out.push_back(rec.diverged ? '1' : '0');
  out.push_back('\n');
}

}  // namespace

std::string sweep_csv_string(const RankedReport& report, bool with_timing) {
  std::string out = sweep_csv_header();
  out.push_back('\n');
  int position = 1;
  for (const RankedRecord& rr : report.ranked) {
    append_row(out, position++, rr.record, rr.rel_assert_pct, with_timing);
  }
  for (const SweepRecord& rec : report.diverged) {
    append_row(out, 0, rec, std::numeric_limits<double>::quiet_NaN(), with_timing);
  }
  return out;
}

void write_sweep_csv(const RankedReport& report, const std::string& path, bool with_timing) {
  write_text_file(path, sweep_csv_string(report, with_timing));
}

std::vector<SweepCsvRow> parse_sweep_csv(std::span<const std::string> lines) {
  if (lines.empty() || lines[0] != sweep_csv_header()) {
    raise(errc::malformed_row, "row 1: expected the sweep CSV header");
  }
  std::vector<SweepCsvRow> rows;
  rows.reserve(lines.size() - 1);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::string ctx = "row " + std::to_string(i + 1) + ": ";
    try {
      const auto fields = split_csv_line(lines[i]);
      if (fields.size() != 13) {
        raise(errc::malformed_row, "expected 13 fields, got " + std::to_string(fields.size()));
      }
      SweepCsvRow row;
      row.rank = static_cast<int>(parse_int(fields[0]));
      row.label = std::string(fields[1]);
      const ArchSpec spec = parse_label(row.label);
      row.features.n_layers = static_cast<int>(parse_int(fields[2]));
      row.features.n_neurons = static_cast<int>(parse_int(fields[3]));
      row.features.mean_neurons = parse_double(fields[4]);
      row.features.std_neurons = parse_double(fields[5]);
      row.features.n_inflections = static_cast<int>(parse_int(fields[6]));
      if (!(features(spec) == row.features)) {
        raise(errc::malformed_row, "features inconsistent with label " + row.label);
      }
      row.mae_pct = parse_double(fields[7]);
      row.sse = parse_double(fields[8]);
      row.rel_assert_pct = parse_double(fields[9]);
      row.train_millis = parse_int(fields[10]);
      row.arch_seed = parse_uint64(fields[11]);
      if (fields[12] == "0") {
        row.diverged = false;
      } else if (fields[12] == "1") {
        row.diverged = true;
      } else {
        raise(errc::malformed_row, "diverged must be 0 or 1");
      }
      if (row.diverged) {
        if (row.rank != 0) raise(errc::malformed_row, "diverged rows carry rank 0");
      } else {
        if (row.rank < 1) raise(errc::malformed_row, "rank must be >= 1");
        if (!std::isfinite(row.mae_pct) || row.mae_pct < 0.0 || !std::isfinite(row.sse) ||
            row.sse < 0.0 || !std::isfinite(row.rel_assert_pct) || row.rel_assert_pct < 0.0) {
          raise(errc::malformed_row, "metrics must be finite and non-negative");
        }
      }
      rows.push_back(std::move(row));
    } catch (const Error& e) {
      raise(e.code(), ctx + e.message());
    }
  }
  return rows;
}

std::vector<SweepCsvRow> read_sweep_csv(const std::string& path) {
  const auto lines = read_lines(path);
  try {
    return parse_sweep_csv(lines);
  } catch (const Error& e) {
    raise(e.code(), path + " " + e.message());
  }
}

}  // namespace archsweep
