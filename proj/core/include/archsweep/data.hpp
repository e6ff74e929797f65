#pragma once

#include <array>
#include <chrono>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "archsweep/mlp.hpp"

namespace archsweep {

using Date = std::chrono::year_month_day;

Date parse_date(std::string_view token);  // strict YYYY-MM-DD
std::string format_date(Date d);

struct PricePoint {
  Date date;
  double close = 0.0;
};

// Dates strictly increasing, closes strictly positive.
struct PriceSeries {
  std::string name;
  std::vector<PricePoint> points;
};

struct ReturnPoint {
  Date date;
  double value = 0.0;
};

// return_t = (P_t - P_{t-1}) / P_{t-1}, one entry per consecutive pair.
std::vector<ReturnPoint> compute_returns(const PriceSeries& series);

inline constexpr int kFeatureCount = 5;

// x holds the previous common trading day's returns of
// [asset, idiv, sp500, icon, ifnc]; y is the asset return at `date`.
struct Sample {
  Date date;
  std::vector<double> x;
  double y = 0.0;
};

// Per-feature z-score parameters fitted on the training rows.
struct FeatureScaler {
  std::vector<double> mean;
  std::vector<double> std;  // population formula; all entries > 0
};

// Inclusive on both ends.
struct DateRange {
  Date first;
  Date last;

  bool contains(Date d) const {
    const std::chrono::sys_days day{d};
    return day >= std::chrono::sys_days{first} && day <= std::chrono::sys_days{last};
  }
};

struct Dataset {
  std::vector<Sample> train;
  std::vector<Sample> test;
  FeatureScaler scaler;
};

// Aligns the five series on their common trading days, lags features by one
// common trading day, routes samples into the date ranges, and standardizes
// x against the training rows (y stays in return units).
Dataset build_dataset(const PriceSeries& asset, std::span<const PriceSeries> indices,
                      DateRange train_range, DateRange test_range);

struct SyntheticData {
  PriceSeries asset;
  std::array<PriceSeries, 4> indices;  // idiv, sp500, icon, ifnc
};

// Business-day series from 2013-01-02. Each index follows an AR(1) return
// process; the asset return tracks the lagged idiv and sp500 returns plus
// noise, so an architecture sweep has real signal to find.
SyntheticData synthesize(std::uint64_t seed, int n_days);

// Schema: header "date,close", ISO dates, decimal closes. LF or CRLF.
PriceSeries load_price_csv(const std::string& path, std::string name);
void write_price_csv(const PriceSeries& series, const std::string& path);
std::string price_csv_string(const PriceSeries& series);

Batch to_batch(std::span<const Sample> samples);

}  // namespace archsweep
