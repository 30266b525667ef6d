#include "wlsep/synth.hpp"

#include <cmath>
#include <cstdio>
#include <random>

#include "wlsep/error.hpp"

namespace wlsep {

namespace {

std::string ticker_name(int i) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "C%03d", i);
  return buf;
}

bool is_weekday(const Date& d) {
  const std::chrono::weekday wd{std::chrono::sys_days{d}};
  return wd != std::chrono::Saturday && wd != std::chrono::Sunday;
}

/// Prices from log-returns, starting every company at 100.
Eigen::MatrixXd integrate(const Eigen::MatrixXd& returns) {
  Eigen::MatrixXd prices(returns.rows() + 1, returns.cols());
  prices.row(0).setConstant(100.0);
  for (Eigen::Index c = 0; c < returns.cols(); ++c) {
    double level = 0.0;
    for (Eigen::Index t = 0; t < returns.rows(); ++t) {
      level += returns(t, c);
      prices(t + 1, c) = 100.0 * std::exp(level);
    }
  }
  return prices;
}

}  // namespace

void validate(const SynthSpec& s) {
  if (s.n_winners < 1 || s.n_losers < 1 || s.n_middle < 0) {
    fail(ErrorKind::InvalidInput, "synth: need at least one winner and one loser");
  }
  if (s.n_winners + s.n_losers + s.n_middle < 3) fail(ErrorKind::InvalidInput, "synth: need at least 3 companies");
  if (s.n_days < 2) fail(ErrorKind::InvalidInput, "synth: need at least 2 days");
  if (!(s.intra_rho >= 0.0 && s.intra_rho < 1.0)) fail(ErrorKind::InvalidInput, "synth: intra_rho must lie in [0, 1)");
  if (!(s.cross_rho >= 0.0 && s.cross_rho <= s.intra_rho)) {
    fail(ErrorKind::InvalidInput, "synth: cross_rho must lie in [0, intra_rho]");
  }
  if (!(s.volatility > 0.0) || !std::isfinite(s.drift_winner) || !std::isfinite(s.drift_loser)) {
    fail(ErrorKind::InvalidInput, "synth: volatility must be positive and drifts finite");
  }
}

std::vector<Date> weekday_calendar(Date start, int n) {
  std::vector<Date> out;
  out.reserve(static_cast<std::size_t>(std::max(n, 0)));
  Date d = start;
  while (static_cast<int>(out.size()) < n) {
    if (is_weekday(d)) out.push_back(d);
    d = add_days(d, 1);
  }
  return out;
}

PricePanel gen_null_panel(int n_companies, int n_days, double volatility, std::uint64_t seed,
                          Date start) {
  if (n_companies < 3 || n_days < 2) fail(ErrorKind::InvalidInput, "null panel needs >= 3 companies and >= 2 days");
  if (!(volatility > 0.0)) fail(ErrorKind::InvalidInput, "volatility must be positive");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd r(n_days - 1, n_companies);
  for (Eigen::Index t = 0; t < r.rows(); ++t)
    for (Eigen::Index c = 0; c < r.cols(); ++c) r(t, c) = volatility * normal(rng);
  PricePanel p;
  p.dates = weekday_calendar(start, n_days);
  for (int c = 0; c < n_companies; ++c) p.tickers.push_back(ticker_name(c));
  p.prices = integrate(r);
  return p;
}

PlantedPanel gen_planted_panel(const SynthSpec& spec) {
  validate(spec);
  const int n = spec.n_winners + spec.n_losers + spec.n_middle;
  const double load = std::sqrt(spec.intra_rho);
  const double idio = std::sqrt(1.0 - spec.intra_rho);
  // corr(f_w, f_l) = q makes the cross-class return correlation intra_rho * q.
  const double q = spec.intra_rho > 0.0 ? spec.cross_rho / spec.intra_rho : 0.0;
  const double q_perp = std::sqrt(1.0 - q * q);
  const double drift_middle = 0.5 * (spec.drift_winner + spec.drift_loser);

  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd r(spec.n_days - 1, n);
  for (Eigen::Index t = 0; t < r.rows(); ++t) {
    const double z1 = normal(rng);
    const double z2 = normal(rng);
    const double f_w = z1;
    const double f_l = q * z1 + q_perp * z2;
    for (int c = 0; c < n; ++c) {
      const double eps = normal(rng);
      double shock = 0.0, drift = 0.0;
      if (c < spec.n_winners) {
        shock = load * f_w + idio * eps;
        drift = spec.drift_winner;
      } else if (c < spec.n_winners + spec.n_losers) {
        shock = load * f_l + idio * eps;
        drift = spec.drift_loser;
      } else {
        shock = eps;
        drift = drift_middle;
      }
      r(t, c) = drift + spec.volatility * shock;
    }
  }

  PlantedPanel out;
  out.panel.dates = weekday_calendar(spec.start, spec.n_days);
  for (int c = 0; c < n; ++c) {
    out.panel.tickers.push_back(ticker_name(c));
    auto& group = c < spec.n_winners                  ? out.true_labels.winners
                  : c < spec.n_winners + spec.n_losers ? out.true_labels.losers
                                                       : out.true_labels.middle;
    group.push_back(out.panel.tickers.back());
  }
  out.panel.prices = integrate(r);
  return out;
}

}  // namespace wlsep
