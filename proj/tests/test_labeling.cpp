#include <doctest.h>

#include <random>

#include "test_util.hpp"
#include "wlsep/error.hpp"
#include "wlsep/labeling.hpp"

using namespace wlsep;
using namespace wlsep::testing;

namespace {

std::vector<CompanyScore> scores_from(const std::vector<double>& growth) {
  std::vector<CompanyScore> out;
  for (std::size_t i = 0; i < growth.size(); ++i) {
    char name[16];
    std::snprintf(name, sizeof name, "S%03zu", i);
    out.push_back({name, 1.0, growth[i], growth[i]});
  }
  return out;
}

}  // namespace

TEST_CASE("average price") {
  CHECK(average_price({10, 10, 10}) == 10.0);
  CHECK(average_price({1, 2, 3, 4}) == 2.5);
  CHECK(average_price({7.2}) == 7.2);
  CHECK_THROWS_AS(average_price({}), Error);
}

TEST_CASE("score companies over begin and end frames") {
  PricePanel p;
  p.dates = daily(ymd(2010, 1, 1), 6);
  p.tickers = {"UP", "DOWN"};
  p.prices.resize(6, 2);
  p.prices << 10, 50,  //
      10, 50,          //
      15, 45,          //
      15, 45,          //
      20, 40,          //
      20, 40;
  const DateWindow begin{p.dates[0], p.dates[1]};
  const DateWindow end{p.dates[4], p.dates[5]};
  const auto s = score_companies(p, begin, end);
  CHECK(s[0].growth == 2.0);
  CHECK(s[1].growth == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(s[1].avp_begin == 50.0);

  for (const auto& sc : score_companies(p, begin, begin)) CHECK(sc.growth == 1.0);

  const DateWindow outside{ymd(2009, 1, 1), ymd(2009, 2, 1)};
  CHECK_THROWS_AS(score_companies(p, outside, end), Error);
}

TEST_CASE("label thirds: class sizes for the four index pools") {
  for (const auto [n, third] : {std::pair{98, 32}, {30, 10}, {49, 16}, {100, 33}}) {
    std::vector<double> g(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) g[static_cast<std::size_t>(i)] = 1.0 + 0.01 * ((i * 37) % n);
    const auto l = label_thirds(scores_from(g));
    CHECK(l.winners.size() == static_cast<std::size_t>(third));
    CHECK(l.losers.size() == static_cast<std::size_t>(third));
    CHECK(l.size() == static_cast<std::size_t>(n));
  }
}

TEST_CASE("label thirds: smallest legal pool and errors") {
  const auto l = label_thirds(scores_from({2.0, 1.0, 0.5}));
  CHECK(l.winners == std::vector<std::string>{"S000"});
  CHECK(l.middle == std::vector<std::string>{"S001"});
  CHECK(l.losers == std::vector<std::string>{"S002"});
  CHECK_THROWS_AS(label_thirds(scores_from({1.0, 2.0})), Error);
}

TEST_CASE("label thirds: ties resolve by ticker") {
  const auto l = label_thirds(scores_from({1.0, 1.0, 1.0, 1.0, 1.0, 1.0}));
  CHECK(l.winners == std::vector<std::string>{"S000", "S001"});
  CHECK(l.losers == std::vector<std::string>{"S004", "S005"});
}

TEST_CASE("label thirds: property - ordering, disjointness and sizes") {
  std::mt19937_64 rng(5);
  std::lognormal_distribution<double> growth(0.0, 0.3);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 3 + static_cast<int>(rng() % 120);
    std::vector<double> g;
    for (int i = 0; i < n; ++i) g.push_back(growth(rng));
    const auto scores = scores_from(g);
    const auto l = label_thirds(scores);
    CHECK(l.winners.size() == static_cast<std::size_t>(n / 3));
    CHECK(l.losers.size() == static_cast<std::size_t>(n / 3));
    CHECK(l.size() == static_cast<std::size_t>(n));
    auto growth_of = [&](const std::string& t) {
      return std::find_if(scores.begin(), scores.end(), [&](auto& s) { return s.ticker == t; })->growth;
    };
    double min_w = 1e300, max_l = -1e300, min_m = 1e300, max_m = -1e300;
    for (const auto& t : l.winners) min_w = std::min(min_w, growth_of(t));
    for (const auto& t : l.losers) max_l = std::max(max_l, growth_of(t));
    for (const auto& t : l.middle) {
      min_m = std::min(min_m, growth_of(t));
      max_m = std::max(max_m, growth_of(t));
    }
    CHECK(min_w >= max_l);
    if (!l.middle.empty()) {
      CHECK(min_w >= max_m);
      CHECK(min_m >= max_l);
    }
    for (const auto& t : l.winners) CHECK(l.label_of(t) == Label::Winner);
  }
}

TEST_CASE("labeling is invariant to rescaling one company's prices") {
  std::mt19937_64 rng(9);
  auto p = random_panel(rng, 60, 12);
  const DateWindow begin{p.dates[0], p.dates[19]}, end{p.dates[40], p.dates[59]};
  const auto before = label_thirds(score_companies(p, begin, end));
  p.prices.col(4) *= 123.0;
  const auto after = label_thirds(score_companies(p, begin, end));
  CHECK(before.winners == after.winners);
  CHECK(before.losers == after.losers);
}

TEST_CASE("default label windows cover the first and last months") {
  PricePanel p;
  p.dates = daily(ymd(2009, 7, 1), 365 * 3);
  p.tickers = {"A"};
  p.prices = Eigen::MatrixXd::Ones(static_cast<Eigen::Index>(p.dates.size()), 1);
  const auto [b, e] = default_label_windows(p, 3);
  CHECK(b.first == ymd(2009, 7, 1));
  CHECK(b.last == ymd(2009, 9, 30));
  CHECK(e.last == p.dates.back());
  CHECK(e.first == add_days(add_months(p.dates.back(), -3), 1));
}

TEST_CASE("labels csv round trip") {
  TempDir dir;
  const auto scores = scores_from({3, 2, 1, 0.5, 0.4, 0.3});
  const auto l = label_thirds(scores);
  write_labels_csv(dir / "labels.csv", l, scores);
  const auto text = read_file(dir / "labels.csv");
  CHECK(text.rfind("ticker,label,growth\nS000,winner,3\n", 0) == 0);
  const auto back = read_labels_csv(dir / "labels.csv");
  CHECK(back.winners == l.winners);
  CHECK(back.losers == l.losers);
  CHECK(back.middle == l.middle);
}
