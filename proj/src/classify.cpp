#include "wlsep/classify.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <sstream>

#include "text_util.hpp"
#include "wlsep/error.hpp"

namespace wlsep {

namespace {

double rate(int errors, int n) { return n == 0 ? 0.0 : static_cast<double>(errors) / n; }

}  // namespace

ProportionEstimate proportion_estimate(int errors, int n) {
  if (n <= 0) fail(ErrorKind::InvalidInput, "proportion estimate needs a positive sample size");
  if (errors < 0 || errors > n) {
    fail(ErrorKind::InvalidInput, "error count must lie in [0, n]");
  }
  ProportionEstimate pe;
  pe.n = n;
  pe.p = static_cast<double>(errors) / n;
  pe.mu = pe.p;
  pe.sigma = std::sqrt(pe.p * (1.0 - pe.p) / n);
  return pe;
}

double LoocvReport::total_rate() const { return rate(total_errors, n_winners + n_losers); }
double LoocvReport::winner_rate() const { return rate(winner_errors, n_winners); }
double LoocvReport::loser_rate() const { return rate(loser_errors, n_losers); }
ProportionEstimate LoocvReport::winner_estimate() const {
  return proportion_estimate(winner_errors, n_winners);
}
ProportionEstimate LoocvReport::loser_estimate() const {
  return proportion_estimate(loser_errors, n_losers);
}

Label knn_vote(Eigen::Index test_index, const DistanceMatrix& dm, const LabelSet& labels,
               const KnnConfig& cfg) {
  if (cfg.k < 1) fail(ErrorKind::InvalidConfig, "k must be at least 1");
  if (test_index < 0 || test_index >= dm.size()) {
    fail(ErrorKind::InvalidInput, "test index out of range");
  }
  const auto& test_ticker = dm.tickers[static_cast<std::size_t>(test_index)];
  if (labels.label_of(test_ticker) == Label::Middle) {
    fail(ErrorKind::InvalidInput, test_ticker + " is neither winner nor loser");
  }

  struct Candidate {
    double dist;
    const std::string* ticker;
    Label label;
  };
  std::vector<Candidate> train;
  for (Eigen::Index j = 0; j < dm.size(); ++j) {
    if (j == test_index) continue;
    const auto& t = dm.tickers[static_cast<std::size_t>(j)];
    const Label l = labels.label_of(t);
    if (l != Label::Middle) train.push_back({dm.values(test_index, j), &t, l});
  }
  if (static_cast<int>(train.size()) < cfg.k) {
    fail(ErrorKind::InvalidConfig, "k = " + std::to_string(cfg.k) + " exceeds the " +
                                       std::to_string(train.size()) + " training points");
  }
  const auto closer = [](const Candidate& a, const Candidate& b) {
    if (a.dist != b.dist) return a.dist < b.dist;
    return *a.ticker < *b.ticker;
  };
  std::partial_sort(train.begin(), train.begin() + cfg.k, train.end(), closer);

  int winners = 0;
  for (int i = 0; i < cfg.k; ++i) winners += train[static_cast<std::size_t>(i)].label == Label::Winner;
  const int losers = cfg.k - winners;
  if (winners == losers) return train.front().label;
  return winners > losers ? Label::Winner : Label::Loser;
}

LoocvReport loocv(const DistanceMatrix& dm, const LabelSet& labels, const KnnConfig& cfg,
                  int window_months) {
  for (const auto* group : {&labels.winners, &labels.losers}) {
    for (const auto& t : *group) {
      if (dm.index_of(t) < 0) fail(ErrorKind::InvalidInput, "labeled ticker " + t + " not in matrix");
    }
  }
  LoocvReport rep;
  rep.window_months = window_months;
  rep.measure = dm.measure;
  rep.n_winners = static_cast<int>(labels.winners.size());
  rep.n_losers = static_cast<int>(labels.losers.size());
  if (rep.n_winners < 2 || rep.n_losers < 2) {
    fail(ErrorKind::InvalidInput, "LOOCV needs at least two winners and two losers");
  }

  for (Eigen::Index i = 0; i < dm.size(); ++i) {
    const auto& t = dm.tickers[static_cast<std::size_t>(i)];
    const Label truth = labels.label_of(t);
    if (truth == Label::Middle) continue;
    const Label predicted = knn_vote(i, dm, labels, cfg);
    rep.predictions.push_back({t, truth, predicted});
    if (predicted != truth) {
      ++rep.total_errors;
      ++(truth == Label::Winner ? rep.winner_errors : rep.loser_errors);
    }
  }
  return rep;
}

PricePanel labeled_subpanel(const PricePanel& panel, const LabelSet& labels) {
  std::vector<std::string> keep = labels.winners;
  keep.insert(keep.end(), labels.losers.begin(), labels.losers.end());
  return panel.select(keep);
}

std::vector<LoocvReport> loocv_sweep(const PricePanel& panel, const LabelSet& labels,
                                     const std::vector<int>& windows,
                                     const std::vector<Measure>& measures, const KnnConfig& cfg,
                                     std::optional<Date> anchor) {
  const PricePanel sub = labeled_subpanel(panel, labels);
  // Slice every window up front so range errors surface before any work starts.
  std::vector<PricePanel> slices;
  for (const int w : windows) slices.push_back(slice_initial_window(sub, w, anchor));

  std::vector<std::future<std::vector<LoocvReport>>> jobs;
  for (std::size_t i = 0; i < windows.size(); ++i) {
    jobs.push_back(std::async(std::launch::async, [&, i] {
      const ReturnMatrix r = compute_log_returns(slices[i]);
      std::vector<LoocvReport> cell;
      for (const Measure m : measures) cell.push_back(loocv(distance_matrix(r, m), labels, cfg, windows[i]));
      return cell;
    }));
  }
  std::vector<LoocvReport> out;
  for (auto& j : jobs) {
    for (auto& rep : j.get()) out.push_back(std::move(rep));
  }
  return out;
}

void write_reports_csv(const std::filesystem::path& path, const std::vector<LoocvReport>& reports) {
  std::ostringstream os;
  os << "window_months,measure,total_rate,winner_rate,loser_rate,winner_sigma,loser_sigma\n";
  for (const auto& r : reports) {
    os << r.window_months << ',' << to_string(r.measure) << ','
       << detail::format_double(r.total_rate()) << ',' << detail::format_double(r.winner_rate())
       << ',' << detail::format_double(r.loser_rate()) << ','
       << detail::format_double(r.winner_estimate().sigma) << ','
       << detail::format_double(r.loser_estimate().sigma) << '\n';
  }
  detail::write_text(path, os.str());
}

nlohmann::json reports_to_json(const std::vector<LoocvReport>& reports) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : reports) {
    const auto we = r.winner_estimate();
    const auto le = r.loser_estimate();
    nlohmann::json preds = nlohmann::json::array();
    for (const auto& p : r.predictions) {
      preds.push_back({{"ticker", p.ticker},
                       {"truth", to_string(p.truth)},
                       {"predicted", to_string(p.predicted)}});
    }
    arr.push_back({{"window_months", r.window_months},
                   {"measure", to_string(r.measure)},
                   {"total_errors", r.total_errors},
                   {"winner_errors", r.winner_errors},
                   {"loser_errors", r.loser_errors},
                   {"n_winners", r.n_winners},
                   {"n_losers", r.n_losers},
                   {"total_rate", r.total_rate()},
                   {"winner_rate", r.winner_rate()},
                   {"loser_rate", r.loser_rate()},
                   {"winner_estimate", {{"mu", we.mu}, {"sigma", we.sigma}, {"n", we.n}}},
                   {"loser_estimate", {{"mu", le.mu}, {"sigma", le.sigma}, {"n", le.n}}},
                   {"predictions", std::move(preds)}});
  }
  return {{"reports", std::move(arr)}};
}

}  // namespace wlsep
