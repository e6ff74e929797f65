#include "archsweep/data.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include "archsweep/csvio.hpp"
#include "archsweep/error.hpp"
#include "archsweep/rng.hpp"

namespace archsweep {

namespace {

using std::chrono::sys_days;

constexpr std::array<const char*, 5> kFeatureSeries = {"asset", "idiv", "sp500", "icon", "ifnc"};

}  // namespace

Date parse_date(std::string_view token) {
  const auto fail = [&token]() {
    raise(errc::malformed_row, "expected date YYYY-MM-DD, got \"" + std::string(token) + "\"");
  };
  if (token.size() != 10 || token[4] != '-' || token[7] != '-') fail();
  const auto digits = [&](int first, int last) {
    int v = 0;
    for (int i = first; i < last; ++i) {
      const char c = token[static_cast<std::size_t>(i)];
      if (c < '0' || c > '9') fail();
      v = v * 10 + (c - '0');
    }
    return v;
  };
  const Date date{std::chrono::year{digits(0, 4)},
                  std::chrono::month{static_cast<unsigned>(digits(5, 7))},
                  std::chrono::day{static_cast<unsigned>(digits(8, 10))}};
  if (!date.ok()) fail();
  return date;
}

std::string format_date(Date d) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(d.year()),
                static_cast<unsigned>(d.month()), static_cast<unsigned>(d.day()));
  return buf;
}

std::vector<ReturnPoint> compute_returns(const PriceSeries& series) {
  if (series.points.size() < 2) {
    raise(errc::insufficient_data,
          "series \"" + series.name + "\" needs at least 2 points for returns");
  }
  std::vector<ReturnPoint> out;
  out.reserve(series.points.size() - 1);
  for (std::size_t i = 1; i < series.points.size(); ++i) {
    const double prev = series.points[i - 1].close;
    out.push_back({series.points[i].date, (series.points[i].close - prev) / prev});
  }
  return out;
}

Dataset build_dataset(const PriceSeries& asset, std::span<const PriceSeries> indices,
                      DateRange train_range, DateRange test_range) {
  if (indices.size() != 4) {
    raise(errc::dimension_mismatch,
          "expected 4 index series, got " + std::to_string(indices.size()));
  }
  for (const DateRange& range : {train_range, test_range}) {
    if (sys_days{range.first} > sys_days{range.last}) {
      raise(errc::usage, "date range starts after it ends: " + format_date(range.first) +
                             ".." + format_date(range.last));
    }
  }
  const bool disjoint = sys_days{train_range.last} < sys_days{test_range.first} ||
                        sys_days{test_range.last} < sys_days{train_range.first};
  if (!disjoint) raise(errc::usage, "train and test date ranges overlap");

  std::array<const PriceSeries*, kFeatureCount> series = {&asset, &indices[0], &indices[1],
                                                          &indices[2], &indices[3]};
  std::array<std::map<sys_days, double>, kFeatureCount> returns;
  for (std::size_t s = 0; s < series.size(); ++s) {
    for (const ReturnPoint& rp : compute_returns(*series[s])) {
      returns[s].emplace(sys_days{rp.date}, rp.value);
    }
  }

  // Trading days where every series has a return; map keys keep them sorted.
  std::vector<sys_days> common;
  for (const auto& [day, value] : returns[0]) {
    bool everywhere = true;
    for (std::size_t s = 1; s < returns.size(); ++s) {
      if (!returns[s].contains(day)) {
        everywhere = false;
        break;
      }
    }
    if (everywhere) common.push_back(day);
  }

  Dataset ds;
  for (std::size_t j = 1; j < common.size(); ++j) {
    const sys_days prev = common[j - 1];
    const sys_days at = common[j];
    const Date date{at};
    std::vector<Sample>* bucket = nullptr;
    if (train_range.contains(date)) {
      bucket = &ds.train;
    } else if (test_range.contains(date)) {
      bucket = &ds.test;
    } else {
      continue;
    }
    Sample sample;
    sample.date = date;
    sample.x.reserve(kFeatureCount);
    for (std::size_t s = 0; s < returns.size(); ++s) {
      sample.x.push_back(returns[s].at(prev));
    }
    sample.y = returns[0].at(at);
    bucket->push_back(std::move(sample));
  }

  if (ds.train.empty()) raise(errc::insufficient_data, "no training samples after alignment");
  if (ds.test.empty()) raise(errc::insufficient_data, "no test samples after alignment");

  ds.scaler.mean.assign(kFeatureCount, 0.0);
  ds.scaler.std.assign(kFeatureCount, 0.0);
  const auto n_train = static_cast<double>(ds.train.size());
  for (const Sample& s : ds.train) {
    for (int f = 0; f < kFeatureCount; ++f) ds.scaler.mean[static_cast<std::size_t>(f)] += s.x[static_cast<std::size_t>(f)];
  }
  for (double& m : ds.scaler.mean) m /= n_train;
  for (const Sample& s : ds.train) {
    for (int f = 0; f < kFeatureCount; ++f) {
      const double d = s.x[static_cast<std::size_t>(f)] - ds.scaler.mean[static_cast<std::size_t>(f)];
      ds.scaler.std[static_cast<std::size_t>(f)] += d * d;
    }
  }
  for (int f = 0; f < kFeatureCount; ++f) {
    auto& sd = ds.scaler.std[static_cast<std::size_t>(f)];
    sd = std::sqrt(sd / n_train);
    if (!(sd > 0.0)) {
      raise(errc::degenerate_feature,
            "feature \"" + std::string(kFeatureSeries[static_cast<std::size_t>(f)]) +
                "\" (series \"" + series[static_cast<std::size_t>(f)]->name +
                "\") has zero variance on train");
    }
  }
  for (std::vector<Sample>* bucket : {&ds.train, &ds.test}) {
    for (Sample& s : *bucket) {
      for (int f = 0; f < kFeatureCount; ++f) {
        auto& v = s.x[static_cast<std::size_t>(f)];
        v = (v - ds.scaler.mean[static_cast<std::size_t>(f)]) / ds.scaler.std[static_cast<std::size_t>(f)];
      }
    }
  }
  return ds;
}

SyntheticData synthesize(std::uint64_t seed, int n_days) {
  if (n_days < 30) {
    raise(errc::usage, "n_days must be >= 30, got " + std::to_string(n_days));
  }

  std::vector<Date> dates;
  dates.reserve(static_cast<std::size_t>(n_days));
  sys_days day{Date{std::chrono::year{2013}, std::chrono::month{1}, std::chrono::day{2}}};
  while (dates.size() < static_cast<std::size_t>(n_days)) {
    const std::chrono::weekday wd{day};
    if (wd != std::chrono::Saturday && wd != std::chrono::Sunday) {
      dates.push_back(Date{day});
    }
    day += std::chrono::days{1};
  }

  SplitMix64 rng(seed);
  const auto n_ret = static_cast<std::size_t>(n_days - 1);
  // Returns are clamped well inside (-1, 1) so the price walk stays positive.
  constexpr double kClamp = 0.45;

  std::array<std::vector<double>, 4> index_returns;
  for (auto& rets : index_returns) {
    rets.resize(n_ret);
    double prev = 0.0;
    for (auto& r : rets) {
      r = std::clamp(0.1 * prev + 0.01 * rng.next_gaussian(), -kClamp, kClamp);
      prev = r;
    }
  }
  std::vector<double> asset_returns(n_ret);
  for (std::size_t i = 0; i < n_ret; ++i) {
    double r = 0.008 * rng.next_gaussian();
    if (i > 0) {
      r += 0.3 * index_returns[0][i - 1] + 0.2 * index_returns[1][i - 1];
    }
    asset_returns[i] = std::clamp(r, -kClamp, kClamp);
  }

  const auto to_series = [&dates](std::string name, const std::vector<double>& rets) {
    PriceSeries s;
    s.name = std::move(name);
    s.points.reserve(dates.size());
    double price = 100.0;
    s.points.push_back({dates[0], price});
    for (std::size_t i = 0; i < rets.size(); ++i) {
      price *= 1.0 + rets[i];
      s.points.push_back({dates[i + 1], price});
    }
    return s;
  };

  SyntheticData out;
  out.asset = to_series("asset", asset_returns);
  out.indices[0] = to_series("idiv", index_returns[0]);
  out.indices[1] = to_series("sp500", index_returns[1]);
  out.indices[2] = to_series("icon", index_returns[2]);
  out.indices[3] = to_series("ifnc", index_returns[3]);
  return out;
}

PriceSeries load_price_csv(const std::string& path, std::string name) {
  const auto lines = read_lines(path);
  if (lines.empty() || lines[0] != "date,close") {
    raise(errc::malformed_row, path + " row 1: expected header \"date,close\"");
  }
  PriceSeries series;
  series.name = std::move(name);
  series.points.reserve(lines.size() - 1);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::string row_ctx = path + " row " + std::to_string(i + 1) + ": ";
    try {
      const auto fields = split_csv_line(lines[i]);
      if (fields.size() != 2) {
        raise(errc::malformed_row,
              "expected 2 fields, got " + std::to_string(fields.size()));
      }
      const Date date = parse_date(fields[0]);
      const double close = parse_double(fields[1]);
      if (!std::isfinite(close)) raise(errc::malformed_row, "close must be finite");
      if (!(close > 0.0)) {
        raise(errc::non_positive_close, "close must be > 0, got " + std::string(fields[1]));
      }
      if (!series.points.empty() &&
          sys_days{date} <= sys_days{series.points.back().date}) {
        raise(errc::non_monotone_dates,
              "dates must be strictly increasing, got " + format_date(date) + " after " +
                  format_date(series.points.back().date));
      }
      series.points.push_back({date, close});
    } catch (const Error& e) {
      raise(e.code(), row_ctx + e.message());
    }
  }
  return series;
}

std::string price_csv_string(const PriceSeries& series) {
  std::string out = "date,close\n";
  for (const PricePoint& p : series.points) {
    out += format_date(p.date);
    out.push_back(',');
    out += format_double(p.close);
    out.push_back('\n');
  }
  return out;
}

void write_price_csv(const PriceSeries& series, const std::string& path) {
  write_text_file(path, price_csv_string(series));
}

Batch to_batch(std::span<const Sample> samples) {
  Batch batch;
  if (samples.empty()) return batch;
  batch.dim = static_cast<int>(samples[0].x.size());
  batch.x.reserve(samples.size() * samples[0].x.size());
  batch.y.reserve(samples.size());
  for (const Sample& s : samples) {
    if (s.x.size() != samples[0].x.size()) {
      raise(errc::dimension_mismatch, "samples disagree on feature count");
    }
    batch.x.insert(batch.x.end(), s.x.begin(), s.x.end());
    batch.y.push_back(s.y);
  }
  return batch;
}

}  // namespace archsweep
