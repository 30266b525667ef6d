#include <doctest.h>

#include <cmath>
#include <random>

#include "test_util.hpp"
#include "wlsep/error.hpp"
#include "wlsep/ingest.hpp"
#include "wlsep/synth.hpp"

using namespace wlsep;
using namespace wlsep::testing;

namespace {

RawSeries series(std::string ticker, std::vector<Date> dates, std::vector<std::optional<double>> closes) {
  return RawSeries{std::move(ticker), std::move(dates), std::move(closes)};
}

RawSeries full_series(std::string ticker, const std::vector<Date>& dates, double start) {
  std::vector<std::optional<double>> c;
  for (std::size_t i = 0; i < dates.size(); ++i) c.emplace_back(start + static_cast<double>(i));
  return series(std::move(ticker), dates, c);
}

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::InvalidInput;
}

}  // namespace

TEST_CASE("align: identical calendars leave the series unchanged") {
  const auto cal = daily(ymd(2009, 7, 1), 10);
  const auto s = full_series("A", cal, 10.0);
  const auto a = align_to_index_calendar(s, cal);
  CHECK(a.dates == s.dates);
  CHECK(a.closes == s.closes);
}

TEST_CASE("align: a non-index date is deleted") {
  const auto cal = weekday_calendar(ymd(2009, 7, 2), 5);  // Thu .. Wed
  // Saturday 2009-07-04 is not an index date.
  const std::vector<Date> dates{cal[0], cal[1], ymd(2009, 7, 4), cal[2], cal[3], cal[4]};
  const auto s = series("A", dates, {1.0, 2.0, 99.0, 3.0, 4.0, 5.0});
  const auto a = align_to_index_calendar(s, cal);
  CHECK(a.size() == cal.size());
  CHECK(a.dates == cal);
  CHECK(a.missing_count() == 0);
  CHECK(a.closes[2] == 3.0);
}

TEST_CASE("align: two missing index dates become missing slots") {
  const auto cal = daily(ymd(2009, 7, 1), 10);
  std::vector<Date> dates;
  std::vector<std::optional<double>> closes;
  for (int i = 0; i < 10; ++i) {
    if (i == 3 || i == 7) continue;
    dates.push_back(cal[i]);
    closes.emplace_back(100.0 + i);
  }
  const auto a = align_to_index_calendar(series("A", dates, closes), cal);
  REQUIRE(a.size() == 10);
  for (int i = 0; i < 10; ++i) {
    if (i == 3 || i == 7) {
      CHECK_FALSE(a.closes[i].has_value());
    } else {
      CHECK(a.closes[i] == 100.0 + i);
    }
  }
  CHECK(a.missing_count() == 2);
}

TEST_CASE("align: idempotent and rejects an empty calendar") {
  const auto cal = daily(ymd(2009, 7, 1), 8);
  const auto s = series("A", {cal[1], cal[2], add_days(cal[7], 3)}, {1.0, std::nullopt, 4.0});
  const auto once = align_to_index_calendar(s, cal);
  const auto twice = align_to_index_calendar(once, cal);
  CHECK(once.dates == twice.dates);
  CHECK(once.closes == twice.closes);
  CHECK(kind_of([&] { align_to_index_calendar(s, {}); }) == ErrorKind::InvalidInput);
}

TEST_CASE("clean: a company over the missing threshold is dropped") {
  const auto cal = daily(ymd(2009, 7, 1), 10);
  std::vector<RawSeries> in;
  for (int c = 0; c < 4; ++c) in.push_back(full_series("K" + std::to_string(c), cal, 10.0 + c));
  auto gappy = full_series("GAP", cal, 50.0);
  gappy.closes[1] = gappy.closes[4] = gappy.closes[8] = std::nullopt;  // 30%
  in.push_back(gappy);
  const auto r = clean_panel(in);
  CHECK(r.panel.cols() == 4);
  REQUIRE(r.dropped.size() == 1);
  CHECK(r.dropped[0] == "GAP");
}

TEST_CASE("clean: exactly 20% missing is kept") {
  const auto cal = daily(ymd(2009, 7, 1), 10);
  auto a = full_series("A", cal, 10.0);
  a.closes[0] = a.closes[5] = std::nullopt;
  const auto r = clean_panel({a, full_series("B", cal, 20.0)});
  CHECK(r.dropped.empty());
  CHECK(r.panel.cols() == 2);
}

TEST_CASE("clean: a gap is filled with the cross-company mean on that date") {
  const auto cal = daily(ymd(2009, 7, 1), 10);
  std::vector<RawSeries> in;
  std::vector<std::optional<double>> ten(10, 10.0), twenty(10, 20.0), gap(10, 30.0);
  gap[4] = std::nullopt;
  in.push_back(series("A", cal, ten));
  in.push_back(series("B", cal, twenty));
  in.push_back(series("C", cal, gap));
  const auto r = clean_panel(in);
  CHECK(r.panel.prices(4, 2) == doctest::Approx(15.0).epsilon(1e-15));
  CHECK(r.panel.prices(3, 2) == 30.0);

  SUBCASE("temporal mean alternative") {
    auto c = gap;
    c[0] = 60.0;  // mean of available = (60 + 8*30) / 9
    in[2] = series("C", cal, c);
    const auto t = clean_panel(in, 0.2, FillMode::TemporalMean);
    CHECK(t.panel.prices(4, 2) == doctest::Approx(300.0 / 9.0));
  }
}

TEST_CASE("clean: dropped companies do not feed the fill mean") {
  const auto cal = daily(ymd(2009, 7, 1), 10);
  std::vector<std::optional<double>> a(10, 10.0), b(10, 20.0), sparse(10, std::nullopt);
  b[2] = std::nullopt;
  sparse[2] = 1000.0;  // 90% missing -> dropped
  const auto r = clean_panel({series("A", cal, a), series("B", cal, b), series("S", cal, sparse)});
  CHECK(r.dropped == std::vector<std::string>{"S"});
  CHECK(r.panel.prices(2, 1) == 10.0);
}

TEST_CASE("clean: error paths") {
  const auto cal = daily(ymd(2009, 7, 1), 10);
  std::vector<std::optional<double>> a(10, 10.0), b(10, 20.0);
  a[6] = b[6] = std::nullopt;
  CHECK(kind_of([&] { clean_panel({series("A", cal, a), series("B", cal, b)}); }) == ErrorKind::Data);
  std::vector<std::optional<double>> empty(10, std::nullopt);
  CHECK(kind_of([&] { clean_panel({series("A", cal, empty)}); }) == ErrorKind::Data);
  CHECK(kind_of([&] { clean_panel({}); }) == ErrorKind::Data);
}

TEST_CASE("clean: property - retained companies respect the threshold and nothing is missing") {
  std::mt19937_64 rng(7);
  std::bernoulli_distribution miss(0.15);
  const auto cal = daily(ymd(2009, 7, 1), 40);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<RawSeries> in;
    for (int c = 0; c < 8; ++c) {
      auto s = full_series("T" + std::to_string(c), cal, 5.0 + c);
      for (auto& v : s.closes)
        if (miss(rng)) v = std::nullopt;
      in.push_back(s);
    }
    CleanResult r;
    try {
      r = clean_panel(in);
    } catch (const Error&) {
      continue;  // an all-missing date is a legitimate outcome
    }
    for (const auto& t : r.panel.tickers) {
      const auto it = std::find_if(in.begin(), in.end(), [&](const auto& s) { return s.ticker == t; });
      CHECK(static_cast<double>(it->missing_count()) / 40.0 <= 0.20);
    }
    CHECK(r.panel.prices.allFinite());
    CHECK((r.panel.prices.array() > 0).all());
    CHECK(r.panel.cols() + static_cast<Eigen::Index>(r.dropped.size()) == 8);
  }
}

TEST_CASE("log returns: values and shape") {
  PricePanel p;
  p.dates = daily(ymd(2009, 7, 1), 2);
  p.tickers = {"A", "B"};
  p.prices.resize(2, 2);
  p.prices << 100.0, 7.0, 105.0, 7.0;
  const auto r = compute_log_returns(p);
  REQUIRE(r.rows() == 1);
  CHECK(r.returns(0, 0) == doctest::Approx(std::log(1.05)).epsilon(1e-15));
  CHECK(r.returns(0, 1) == 0.0);
  CHECK(r.dates.front() == p.dates[1]);

  std::mt19937_64 rng(3);
  const auto ten = random_panel(rng, 10, 3);
  CHECK(compute_log_returns(ten).rows() == 9);

  PricePanel one = ten;
  one.dates.resize(1);
  one.prices = ten.prices.topRows(1);
  CHECK(kind_of([&] { compute_log_returns(one); }) == ErrorKind::Data);
}

TEST_CASE("log returns: property - cumulative sum recovers prices") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const auto p = random_panel(rng, 30, 5);
    const auto r = compute_log_returns(p);
    CHECK(r.rows() == p.rows() - 1);
    for (Eigen::Index c = 0; c < p.cols(); ++c) {
      double level = std::log(p.prices(0, c));
      for (Eigen::Index t = 0; t < r.rows(); ++t) {
        level += r.returns(t, c);
        const double rebuilt = std::exp(level);
        CHECK(std::abs(rebuilt - p.prices(t + 1, c)) / p.prices(t + 1, c) < 1e-10);
      }
    }
  }
}

TEST_CASE("slice: first quarter of a Hang Seng style calendar") {
  // 1 October is a market holiday in Hong Kong.
  auto cal = weekday_calendar(ymd(2009, 7, 2), 800);
  std::erase(cal, ymd(2009, 10, 1));
  PricePanel p;
  p.dates = cal;
  p.tickers = {"A"};
  p.prices = Eigen::MatrixXd::Constant(static_cast<Eigen::Index>(cal.size()), 1, 10.0);
  const auto q = slice_initial_window(p, 3);
  CHECK(q.dates.back() == ymd(2009, 9, 30));
  CHECK(q.dates.front() == ymd(2009, 7, 2));

  SUBCASE("anchored at the nominal period start") {
    const auto plain = weekday_calendar(ymd(2009, 7, 2), 800);
    PricePanel w = p;
    w.dates = plain;
    w.prices = Eigen::MatrixXd::Constant(static_cast<Eigen::Index>(plain.size()), 1, 10.0);
    CHECK(slice_initial_window(w, 3, ymd(2009, 7, 1)).dates.back() == ymd(2009, 9, 30));
    CHECK(slice_initial_window(w, 3).dates.back() == ymd(2009, 10, 1));
  }
}

TEST_CASE("slice: six months = three months + months four to six") {
  const auto cal = weekday_calendar(ymd(2009, 7, 2), 400);
  PricePanel p;
  p.dates = cal;
  p.tickers = {"A"};
  p.prices = Eigen::MatrixXd::Constant(static_cast<Eigen::Index>(cal.size()), 1, 1.0);
  const auto three = slice_initial_window(p, 3).rows();
  const auto six = slice_initial_window(p, 6).rows();
  // Independent count: weekdays in [2009-10-02, 2010-01-02).
  int later = 0;
  for (Date d = ymd(2009, 10, 2); d < ymd(2010, 1, 2); d = add_days(d, 1)) {
    const std::chrono::weekday wd{std::chrono::sys_days{d}};
    later += wd != std::chrono::Saturday && wd != std::chrono::Sunday;
  }
  CHECK(six == three + later);
  CHECK(three == 66);  // weekdays 2009-07-02 .. 2009-10-01: 22 + 21 + 22 + 1
}

TEST_CASE("slice: full span is the identity, longer spans fail") {
  // 36 months from 2009-07-02 end the day before 2012-07-02.
  const auto cal = weekday_calendar(ymd(2009, 7, 2), 782);
  PricePanel p;
  p.dates = cal;
  p.tickers = {"A"};
  p.prices = Eigen::MatrixXd::Constant(static_cast<Eigen::Index>(cal.size()), 1, 1.0);
  CHECK(cal.back() == ymd(2012, 6, 29));
  const auto full = slice_initial_window(p, 36);
  CHECK(full.rows() == p.rows());
  CHECK(kind_of([&] { slice_initial_window(p, 37); }) == ErrorKind::Data);

  const auto r = compute_log_returns(p);
  CHECK(slice_initial_window(r, 3).rows() > 0);
}

TEST_CASE("csv: per-company files, calendar and wide layout") {
  TempDir dir;
  write_file(dir / "calendar.csv", "date\n2009-07-01\n2009-07-02\n2009-07-03\n");
  write_file(dir / "AAA.csv", "date,close\n2009-07-01,10.5\n2009-07-02,NA\n2009-07-03,11\n");
  write_file(dir / "BBB.csv", "Date,Open,Close\n2009-07-01,1,20\n2009-07-02,1,\n2009-07-04,1,22\n");
  const auto cal = read_calendar_csv(dir / "calendar.csv");
  CHECK(cal.size() == 3);
  const auto raw = read_company_dir(dir.path(), dir / "calendar.csv");
  REQUIRE(raw.size() == 2);
  CHECK(raw[0].ticker == "AAA");
  CHECK_FALSE(raw[0].closes[1].has_value());
  CHECK(raw[1].closes[0] == 20.0);
  CHECK_FALSE(raw[1].closes[1].has_value());
  const auto aligned = align_to_index_calendar(raw[1], cal);
  CHECK_FALSE(aligned.closes[2].has_value());

  write_file(dir / "wide.csv", "date,X,Y\n2009-07-01,1,2\n2009-07-02,NA,3\n2009-07-03,,4\n");
  const auto wide = read_wide_csv(dir / "wide.csv");
  REQUIRE(wide.size() == 2);
  CHECK(wide[0].missing_count() == 2);
  CHECK(wide[1].closes[2] == 4.0);

  const auto cleaned = clean_panel(
      {align_to_index_calendar(raw[0], cal), align_to_index_calendar(wide[1], cal)}, 0.5);
  write_panel_csv(dir / "out.csv", cleaned.panel);
  const auto back = read_wide_csv(dir / "out.csv");
  CHECK(back[0].closes[0] == 10.5);
  CHECK(back[0].closes[1] == 3.0);  // only Y has a price on 2009-07-02
}

TEST_CASE("csv: malformed input is a data error") {
  TempDir dir;
  write_file(dir / "bad.csv", "date,close\n2009-07-01,-3\n");
  CHECK(kind_of([&] { read_company_csv(dir / "bad.csv", "BAD"); }) == ErrorKind::Data);
  write_file(dir / "order.csv", "date,close\n2009-07-02,1\n2009-07-01,2\n");
  CHECK(kind_of([&] { read_company_csv(dir / "order.csv", "O"); }) == ErrorKind::InvalidInput);
  CHECK(kind_of([&] { read_company_dir(dir / "missing", dir / "c.csv"); }) == ErrorKind::Io);
}
