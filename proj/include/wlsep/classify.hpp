#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "wlsep/ingest.hpp"
#include "wlsep/labeling.hpp"
#include "wlsep/metrics.hpp"

namespace wlsep {

struct KnnConfig {
  int k = 1;
};

struct Prediction {
  std::string ticker;
  Label truth;
  Label predicted;
};

struct ProportionEstimate {
  double p = 0.0;
  int n = 0;
  double mu = 0.0;
  double sigma = 0.0;
};

ProportionEstimate proportion_estimate(int errors, int n);

struct LoocvReport {
  int window_months = 0;
  Measure measure = Measure::Distance;
  int total_errors = 0;
  int winner_errors = 0;
  int loser_errors = 0;
  int n_winners = 0;
  int n_losers = 0;
  std::vector<Prediction> predictions;  // in distance-matrix order

  double total_rate() const;
  double winner_rate() const;
  double loser_rate() const;
  ProportionEstimate winner_estimate() const;
  ProportionEstimate loser_estimate() const;
};

/// Majority vote of the k nearest labeled companies other than `test_index`.
/// Distance ties at the k-boundary go to the lexicographically smaller
/// ticker; a tied vote falls back to the single nearest neighbor.
Label knn_vote(Eigen::Index test_index, const DistanceMatrix& dm, const LabelSet& labels,
               const KnnConfig& cfg = {});

/// Leave-one-out over the winners and losers present in `dm`.
LoocvReport loocv(const DistanceMatrix& dm, const LabelSet& labels, const KnnConfig& cfg = {},
                  int window_months = 0);

/// One report per (window, measure). Returns are recomputed from each initial
/// price window restricted to the labeled winners and losers.
std::vector<LoocvReport> loocv_sweep(const PricePanel& panel, const LabelSet& labels,
                                     const std::vector<int>& windows,
                                     const std::vector<Measure>& measures,
                                     const KnnConfig& cfg = {},
                                     std::optional<Date> anchor = std::nullopt);

/// Winners followed by losers, restricted to tickers in `panel`.
PricePanel labeled_subpanel(const PricePanel& panel, const LabelSet& labels);

/// `window_months,measure,total_rate,winner_rate,loser_rate,winner_sigma,loser_sigma`
void write_reports_csv(const std::filesystem::path& path, const std::vector<LoocvReport>& reports);
nlohmann::json reports_to_json(const std::vector<LoocvReport>& reports);

}  // namespace wlsep
