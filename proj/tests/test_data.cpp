#include <array>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <unistd.h>
#include <vector>

#include "archsweep/csvio.hpp"
#include "archsweep/data.hpp"
#include "doctest.h"
#include "raises.hpp"

using namespace archsweep;
namespace fs = std::filesystem;

namespace {

fs::path make_temp_dir(const char* tag) {
  static int counter = 0;
  const fs::path dir = fs::temp_directory_path() /
                       ("archsweep_test_" + std::to_string(::getpid()) + "_" + tag + "_" +
                        std::to_string(counter++));
  fs::create_directories(dir);
  return dir;
}

Date day(int y, unsigned m, unsigned d) {
  return Date{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
}

PriceSeries series(std::string name, std::vector<Date> dates, std::vector<double> closes) {
  PriceSeries s;
  s.name = std::move(name);
  for (std::size_t i = 0; i < dates.size(); ++i) s.points.push_back({dates[i], closes[i]});
  return s;
}

double ret(double prev, double cur) { return (cur - prev) / prev; }

}  // namespace

TEST_CASE("parse_date accepts exactly YYYY-MM-DD") {
  const Date d = parse_date("2013-01-02");
  CHECK(format_date(d) == "2013-01-02");
  CHECK(format_date(parse_date("1999-12-31")) == "1999-12-31");

  for (const char* bad : {"2013-1-02", "2013/01/02", "13-01-02", "2013-01-02 ", "2013-01-2",
                          "2013-13-01", "2013-00-10", "2013-02-30", "20130102", "", "aaaa-bb-cc"}) {
    CHECK_RAISES(malformed_row, parse_date(bad));
  }
}

TEST_CASE("compute_returns chains consecutive closes") {
  const PriceSeries s =
      series("a", {day(2020, 1, 1), day(2020, 1, 2), day(2020, 1, 3)}, {100.0, 110.0, 99.0});
  const std::vector<ReturnPoint> r = compute_returns(s);
  REQUIRE(r.size() == 2);
  CHECK(r[0].value == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(r[1].value == doctest::Approx(-0.1).epsilon(1e-15));
  CHECK(format_date(r[0].date) == "2020-01-02");

  CHECK_RAISES(insufficient_data,
               compute_returns(series("a", {day(2020, 1, 1)}, {100.0})));
}

TEST_CASE("price CSV round-trips and validates its schema") {
  const fs::path dir = make_temp_dir("csv");
  const PriceSeries s =
      series("asset", {day(2020, 1, 1), day(2020, 1, 2)}, {100.0, 101.5});
  const fs::path path = dir / "asset.csv";
  write_price_csv(s, path.string());
  const PriceSeries back = load_price_csv(path.string(), "asset");
  REQUIRE(back.points.size() == 2);
  CHECK(back.points[0].close == 100.0);
  CHECK(back.points[1].close == 101.5);
  CHECK(price_csv_string(back) == price_csv_string(s));

  const auto write_and_load = [&](const char* name, const std::string& body) {
    const fs::path p = dir / name;
    write_text_file(p.string(), body);
    return load_price_csv(p.string(), "x");
  };
  CHECK_RAISES_MSG(malformed_row, "row 1",
                   write_and_load("h.csv", "close,date\n2020-01-01,1\n"));
  CHECK_RAISES_MSG(malformed_row, "row 2",
                   write_and_load("f.csv", "date,close\n2020-01-01\n"));
  CHECK_RAISES_MSG(malformed_row, "row 3",
                   write_and_load("n.csv", "date,close\n2020-01-01,1\n2020-01-02,abc\n"));
  CHECK_RAISES(non_positive_close,
               write_and_load("z.csv", "date,close\n2020-01-01,0\n2020-01-02,1\n"));
  CHECK_RAISES(non_positive_close,
               write_and_load("neg.csv", "date,close\n2020-01-01,-5\n"));
  CHECK_RAISES(non_monotone_dates,
               write_and_load("m.csv", "date,close\n2020-01-02,1\n2020-01-01,2\n"));
  CHECK_RAISES(non_monotone_dates,
               write_and_load("dup.csv", "date,close\n2020-01-02,1\n2020-01-02,2\n"));
  CHECK_RAISES(malformed_row,
               write_and_load("inf.csv", "date,close\n2020-01-01,inf\n"));
  CHECK_RAISES(io_error, load_price_csv((dir / "missing.csv").string(), "x"));

  // CRLF input parses the same as LF.
  const PriceSeries crlf = write_and_load("crlf.csv", "date,close\r\n2020-01-01,7\r\n");
  CHECK(crlf.points.size() == 1);
  fs::remove_all(dir);
}

namespace {

// Eight consecutive business days, all five series complete.
const std::vector<Date> kDays = {day(2021, 3, 1), day(2021, 3, 2), day(2021, 3, 3),
                                 day(2021, 3, 4), day(2021, 3, 5), day(2021, 3, 8),
                                 day(2021, 3, 9), day(2021, 3, 10)};

struct Fixture {
  PriceSeries asset;
  std::vector<PriceSeries> indices;
  DateRange train{day(2021, 3, 1), day(2021, 3, 5)};
  DateRange test{day(2021, 3, 8), day(2021, 3, 10)};
};

Fixture make_fixture() {
  Fixture f;
  f.asset = series("asset", kDays, {100, 102, 105, 103, 108, 104, 109, 111});
  f.indices = {
      series("idiv", kDays, {50, 51, 49, 52, 50, 53, 51, 54}),
      series("sp500", kDays, {200, 198, 203, 201, 207, 204, 210, 208}),
      series("icon", kDays, {80, 83, 81, 85, 82, 86, 84, 88}),
      series("ifnc", kDays, {140, 137, 143, 139, 146, 141, 148, 144}),
  };
  return f;
}

}  // namespace

TEST_CASE("build_dataset lags features by one common day and scales on train only") {
  const Fixture f = make_fixture();
  const Dataset ds = build_dataset(f.asset, f.indices, f.train, f.test);

  // Returns exist from the second day on; each sample also needs a lagged day.
  REQUIRE(ds.train.size() == 3);
  REQUIRE(ds.test.size() == 3);

  CHECK(format_date(ds.train[0].date) == "2021-03-03");
  CHECK(format_date(ds.train[1].date) == "2021-03-04");
  CHECK(format_date(ds.train[2].date) == "2021-03-05");
  CHECK(format_date(ds.test[0].date) == "2021-03-08");
  CHECK(format_date(ds.test[1].date) == "2021-03-09");
  CHECK(format_date(ds.test[2].date) == "2021-03-10");

  // y is the raw asset return at the sample date.
  CHECK(ds.train[0].y == doctest::Approx(ret(102, 105)).epsilon(1e-15));
  CHECK(ds.train[1].y == doctest::Approx(ret(105, 103)).epsilon(1e-15));
  CHECK(ds.test[2].y == doctest::Approx(ret(109, 111)).epsilon(1e-15));

  // Train features are z-scored with the population formula, so each of the
  // five columns averages to zero with unit variance.
  REQUIRE(ds.scaler.mean.size() == 5);
  REQUIRE(ds.scaler.std.size() == 5);
  for (int c = 0; c < 5; ++c) {
    double sum = 0.0, sumsq = 0.0;
    for (const Sample& s : ds.train) {
      sum += s.x[c];
      sumsq += s.x[c] * s.x[c];
    }
    CHECK(std::abs(sum / 3.0) < 1e-12);
    CHECK(sumsq / 3.0 == doctest::Approx(1.0).epsilon(1e-12));
  }

  // Feature 0 of the first train sample is the asset return one common day
  // earlier (2021-03-02), standardized by the train statistics.
  const double raw = ret(100, 102);
  CHECK(ds.train[0].x[0] ==
        doctest::Approx((raw - ds.scaler.mean[0]) / ds.scaler.std[0]).epsilon(1e-12));

  // Feature order is asset, then the four indices in input order.
  const double raw_idiv = ret(50, 51);
  CHECK(ds.train[0].x[1] ==
        doctest::Approx((raw_idiv - ds.scaler.mean[1]) / ds.scaler.std[1]).epsilon(1e-12));
}

TEST_CASE("a price shock propagates only to y at the shock day and x one day later") {
  const Fixture f = make_fixture();
  const Dataset base = build_dataset(f.asset, f.indices, f.train, f.test);

  // Scale every close from 2021-03-09 onward: the return at 03-09 changes,
  // later returns are ratios of scaled prices and stay put.
  Fixture shocked = make_fixture();
  for (PricePoint& p : shocked.asset.points) {
    if (std::chrono::sys_days{p.date} >= std::chrono::sys_days{day(2021, 3, 9)}) {
      p.close *= 1.02;
    }
  }
  const Dataset ds = build_dataset(shocked.asset, shocked.indices, f.train, f.test);

  for (std::size_t i = 0; i < base.train.size(); ++i) {
    CHECK(ds.train[i].y == base.train[i].y);
    CHECK(ds.train[i].x == base.train[i].x);
  }
  CHECK(ds.scaler.mean == base.scaler.mean);
  CHECK(ds.scaler.std == base.scaler.std);

  CHECK(ds.test[0].y == base.test[0].y);  // 03-08 untouched
  CHECK(ds.test[1].y != base.test[1].y);  // 03-09 carries the shock
  // 03-10 is a ratio of two scaled prices; equal up to rounding of the scale.
  CHECK(ds.test[2].y == doctest::Approx(base.test[2].y).epsilon(1e-12));
  CHECK(ds.test[0].x == base.test[0].x);
  CHECK(ds.test[1].x == base.test[1].x);        // lag of 03-08, unchanged
  CHECK(ds.test[2].x[0] != base.test[2].x[0]);  // lag of 03-09, shocked
  for (int c = 1; c < 5; ++c) CHECK(ds.test[2].x[c] == base.test[2].x[c]);
}

TEST_CASE("common days are the intersection of all five return series") {
  Fixture f = make_fixture();
  // Drop 2021-03-03 from idiv: its return at 03-04 then spans 03-02 -> 03-04,
  // and 03-03 stops being a common day for everyone.
  auto& idiv = f.indices[0].points;
  idiv.erase(idiv.begin() + 2);

  const Dataset ds = build_dataset(f.asset, f.indices, f.train, f.test);
  REQUIRE(ds.train.size() == 2);
  CHECK(format_date(ds.train[0].date) == "2021-03-04");
  CHECK(format_date(ds.train[1].date) == "2021-03-05");
  // The lag for 03-04 is the previous common day 03-02, not 03-03.
  const double raw = ret(100, 102);  // asset return at 03-02
  CHECK(ds.train[0].x[0] ==
        doctest::Approx((raw - ds.scaler.mean[0]) / ds.scaler.std[0]).epsilon(1e-12));
}

TEST_CASE("build_dataset validates shapes, ranges, and variance") {
  const Fixture f = make_fixture();

  std::vector<PriceSeries> three(f.indices.begin(), f.indices.begin() + 3);
  CHECK_RAISES(dimension_mismatch, build_dataset(f.asset, three, f.train, f.test));

  CHECK_RAISES(usage, build_dataset(f.asset, f.indices,
                                    DateRange{day(2021, 3, 4), day(2021, 3, 1)}, f.test));
  CHECK_RAISES(usage, build_dataset(f.asset, f.indices, f.train,
                                    DateRange{day(2021, 3, 4), day(2021, 3, 9)}));

  // A test window past the data leaves the split empty.
  CHECK_RAISES(insufficient_data,
               build_dataset(f.asset, f.indices, f.train,
                             DateRange{day(2022, 1, 1), day(2022, 2, 1)}));

  Fixture flat = make_fixture();
  for (PricePoint& p : flat.indices[2].points) p.close = 80.0;
  CHECK_RAISES_MSG(degenerate_feature, "icon",
                   build_dataset(flat.asset, flat.indices, f.train, f.test));
}

TEST_CASE("synthesize emits seeded business-day series") {
  const SyntheticData a = synthesize(7, 100);
  const SyntheticData b = synthesize(7, 100);
  const SyntheticData c = synthesize(8, 100);

  CHECK(a.asset.name == "asset");
  CHECK(a.indices[0].name == "idiv");
  CHECK(a.indices[1].name == "sp500");
  CHECK(a.indices[2].name == "icon");
  CHECK(a.indices[3].name == "ifnc");

  REQUIRE(a.asset.points.size() == 100);
  CHECK(format_date(a.asset.points[0].date) == "2013-01-02");
  CHECK(price_csv_string(a.asset) == price_csv_string(b.asset));
  CHECK(price_csv_string(a.indices[3]) == price_csv_string(b.indices[3]));
  CHECK(price_csv_string(a.asset) != price_csv_string(c.asset));

  bool weekdays_only = true;
  bool positive = true;
  for (const PricePoint& p : a.asset.points) {
    const std::chrono::weekday wd{std::chrono::sys_days{p.date}};
    weekdays_only = weekdays_only && wd != std::chrono::Saturday && wd != std::chrono::Sunday;
    positive = positive && p.close > 0.0;
  }
  CHECK(weekdays_only);
  CHECK(positive);

  CHECK_RAISES(usage, synthesize(1, 10));
}

TEST_CASE("synthetic data trains end to end through build_dataset") {
  const SyntheticData synth = synthesize(3, 200);
  const Dataset ds = build_dataset(synth.asset, synth.indices,
                                   DateRange{day(2013, 1, 1), day(2013, 6, 30)},
                                   DateRange{day(2013, 7, 1), day(2013, 12, 31)});
  CHECK(ds.train.size() > 100);
  CHECK(ds.test.size() > 50);
  CHECK(ds.train.size() + ds.test.size() <= 199);
}

TEST_CASE("to_batch flattens samples row-major") {
  std::vector<Sample> samples(2);
  samples[0].date = day(2021, 1, 1);
  samples[0].x = {1.0, 2.0, 3.0, 4.0, 5.0};
  samples[0].y = 0.5;
  samples[1].date = day(2021, 1, 2);
  samples[1].x = {6.0, 7.0, 8.0, 9.0, 10.0};
  samples[1].y = -0.5;

  const Batch b = to_batch(samples);
  CHECK(b.dim == 5);
  CHECK(b.size() == 2);
  CHECK(b.x == std::vector<double>{1, 2, 3, 4, 5, 6, 7, 8, 9, 10});
  CHECK(b.y == std::vector<double>{0.5, -0.5});

  samples[1].x.pop_back();
  CHECK_RAISES(dimension_mismatch, to_batch(samples));
}
