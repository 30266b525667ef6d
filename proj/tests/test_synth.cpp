#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "test_util.hpp"
#include "wlsep/classify.hpp"
#include "wlsep/error.hpp"
#include "wlsep/synth.hpp"

using namespace wlsep;
using namespace wlsep::testing;

namespace {

double loocv_error(const PricePanel& panel, const LabelSet& labels) {
  const auto r = compute_log_returns(labeled_subpanel(panel, labels));
  return loocv(distance_matrix(r, Measure::Distance), labels).total_rate();
}

double mean_offdiag(const Eigen::MatrixXd& c, int begin_a, int end_a, int begin_b, int end_b) {
  double sum = 0.0;
  int n = 0;
  for (int i = begin_a; i < end_a; ++i)
    for (int j = begin_b; j < end_b; ++j) {
      if (i == j) continue;
      sum += c(i, j);
      ++n;
    }
  return sum / n;
}

bool same_members(std::vector<std::string> a, std::vector<std::string> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a == b;
}

}  // namespace

TEST_CASE("weekday calendar") {
  const auto cal = weekday_calendar(ymd(2009, 7, 4), 3);  // a Saturday
  REQUIRE(cal.size() == 3);
  CHECK(cal[0] == ymd(2009, 7, 6));
  CHECK(cal[2] == ymd(2009, 7, 8));
  CHECK(weekday_calendar(ymd(2009, 7, 2), 783).back() == ymd(2012, 7, 2));
}

TEST_CASE("generators are deterministic per seed") {
  SynthSpec spec;
  spec.n_middle = 4;
  spec.seed = 42;
  const auto a = gen_planted_panel(spec);
  const auto b = gen_planted_panel(spec);
  CHECK(a.panel.prices == b.panel.prices);
  CHECK(a.panel.tickers == b.panel.tickers);
  CHECK(a.panel.tickers.front() == "C000");
  CHECK(a.panel.prices.row(0).isConstant(100.0));
  spec.seed = 43;
  CHECK(gen_planted_panel(spec).panel.prices != a.panel.prices);

  TempDir dir;
  write_panel_csv(dir / "a.csv", gen_null_panel(10, 50, 0.02, 9));
  write_panel_csv(dir / "b.csv", gen_null_panel(10, 50, 0.02, 9));
  CHECK(read_file(dir / "a.csv") == read_file(dir / "b.csv"));
}

TEST_CASE("null panel has no correlation structure") {
  const auto p = gen_null_panel(100, 500, 0.02, 1);
  const auto c = correlation_matrix(compute_log_returns(p));
  CHECK(std::abs(mean_offdiag(c, 0, 100, 0, 100)) < 0.02);
}

TEST_CASE("planted within-class and cross-class correlation") {
  double within = 0.0;
  double cross = 0.0;
  const int seeds = 50;
  for (int s = 1; s <= seeds; ++s) {
    SynthSpec spec;
    spec.seed = static_cast<std::uint64_t>(s);
    const auto c = correlation_matrix(compute_log_returns(gen_planted_panel(spec).panel));
    within += 0.5 * (mean_offdiag(c, 0, 16, 0, 16) + mean_offdiag(c, 16, 32, 16, 32));
    cross += mean_offdiag(c, 0, 16, 16, 32);
  }
  within /= seeds;
  cross /= seeds;
  CHECK(within >= 0.7);
  CHECK(within <= 0.9);
  CHECK(std::abs(cross) < 0.05);

  SynthSpec spec;
  spec.cross_rho = 0.4;
  spec.n_days = 2000;
  const auto c = correlation_matrix(compute_log_returns(gen_planted_panel(spec).panel));
  CHECK(std::abs(mean_offdiag(c, 0, 16, 16, 32) - 0.4) < 0.05);
}

TEST_CASE("drift recovery through the labeling rule") {
  SynthSpec spec;
  spec.n_middle = 16;
  spec.n_days = 783;
  spec.seed = 4;
  const auto planted = gen_planted_panel(spec);
  const auto [begin, end] = default_label_windows(planted.panel);
  const auto labels = label_thirds(score_companies(planted.panel, begin, end));
  CHECK(same_members(labels.winners, planted.true_labels.winners));
  CHECK(same_members(labels.losers, planted.true_labels.losers));
  CHECK(same_members(labels.middle, planted.true_labels.middle));
}

TEST_CASE("indistinguishable classes land in the null band") {
  const int seeds = 20;
  double mean = 0.0;
  for (int s = 1; s <= seeds; ++s) {
    SynthSpec spec;
    spec.cross_rho = spec.intra_rho;
    spec.seed = static_cast<std::uint64_t>(s);
    const auto planted = gen_planted_panel(spec);
    mean += loocv_error(planted.panel, planted.true_labels);
  }
  mean /= seeds;
  const double band = 3.0 * std::sqrt(0.25 / (32.0 * seeds));
  CHECK(std::abs(mean - 0.5) <= band);
}

TEST_CASE("detectability rises with intra-class correlation") {
  double prev = 1.0;
  for (const double rho : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    double mean = 0.0;
    for (int s = 1; s <= 20; ++s) {
      SynthSpec spec;
      spec.intra_rho = rho;
      spec.seed = static_cast<std::uint64_t>(s);
      const auto planted = gen_planted_panel(spec);
      mean += loocv_error(planted.panel, planted.true_labels) / 20.0;
    }
    CAPTURE(rho);
    CHECK(mean <= prev + 1e-12);
    prev = mean;
  }
  CHECK(prev == 0.0);
}

TEST_CASE("labeled null panel LOOCV stays near chance") {
  const auto p = gen_null_panel(100, 126, 0.02, 11);
  const DateWindow begin{p.dates.front(), p.dates[62]};
  const DateWindow end{p.dates[63], p.dates.back()};
  const auto labels = label_thirds(score_companies(p, begin, end));
  PricePanel first = p;
  first.dates.resize(63);
  first.prices = p.prices.topRows(63).eval();
  const double err = loocv_error(first, labels);
  CHECK(std::abs(err - 0.5) <= 3.0 * std::sqrt(0.25 / 66.0));
}

TEST_CASE("invalid synth parameters") {
  SynthSpec bad;
  bad.intra_rho = 1.0;
  CHECK_THROWS_AS(gen_planted_panel(bad), Error);
  bad = {};
  bad.cross_rho = 0.9;
  CHECK_THROWS_AS(gen_planted_panel(bad), Error);
  bad = {};
  bad.n_losers = 0;
  CHECK_THROWS_AS(gen_planted_panel(bad), Error);
  CHECK_THROWS_AS(gen_null_panel(2, 10, 0.02, 1), Error);
  CHECK_THROWS_AS(gen_null_panel(5, 10, 0.0, 1), Error);
}
