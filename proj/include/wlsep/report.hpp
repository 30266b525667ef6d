#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wlsep/classify.hpp"
#include "wlsep/embed.hpp"
#include "wlsep/ingest.hpp"
#include "wlsep/labeling.hpp"
#include "wlsep/metrics.hpp"
#include "wlsep/synth.hpp"

namespace wlsep {

struct Histogram {
  std::vector<double> bin_edges;  // bins + 1, strictly increasing
  std::vector<int> counts;
};

/// Equal-width bins over [min, max]; the last bin is closed on the right.
/// A constant input gets a unit-width bin range centred on the value.
Histogram build_histogram(const std::vector<double>& values, int bins);
Histogram build_histogram(const std::vector<double>& values, int bins, double lo, double hi);

/// ww/ll/wl counts over shared bin edges spanning all three series.
struct PairHistogram {
  Measure measure = Measure::Distance;
  int window_months = 0;
  std::vector<double> bin_edges;
  std::vector<int> ww;
  std::vector<int> ll;
  std::vector<int> wl;
};

PairHistogram build_pair_histogram(const PairPartition& pp, int bins);

struct RunConfig {
  std::optional<std::filesystem::path> data;      // directory of company CSVs or a wide CSV
  std::optional<std::filesystem::path> calendar;  // index calendar (directory input)
  std::optional<SynthSpec> synth;                 // used when no data is given
  bool synth_null = false;
  int synth_null_companies = 100;
  std::optional<DateWindow> begin_window;
  std::optional<DateWindow> end_window;
  int label_months = 3;  // frame length when the label windows are not given
  std::optional<Date> anchor;
  std::vector<int> windows{3, 6, 9, 12, 15, 18};
  std::vector<Measure> measures{Measure::Distance, Measure::Proximity};
  KnnConfig knn;
  int bins = 20;
  double missing_threshold = 0.20;
  FillMode fill = FillMode::CrossSectionalMean;
  ElasticNetParams elastic;
  bool embed_all = false;  // fit on every company instead of winners + losers
  std::filesystem::path out = "out";
};

void validate(const RunConfig& cfg);

/// Flat `key = value` lines; `#` starts a comment. Unknown keys are an error.
std::map<std::string, std::string> read_config_file(const std::filesystem::path& path);
/// Applies string key/values onto `cfg` (later calls override earlier ones).
void apply_config(RunConfig& cfg, const std::map<std::string, std::string>& kv);

std::vector<int> parse_windows(std::string_view text);
std::vector<Measure> parse_measures(std::string_view text);  // distance|proximity|both
DateWindow parse_date_window(std::string_view text);          // FIRST:LAST

/// Loads and cleans the configured input (files or synthetic generator).
struct LoadedData {
  PricePanel panel;
  std::vector<std::string> dropped;
  std::optional<LabelSet> planted_labels;
};
LoadedData load_data(const RunConfig& cfg);

struct LabelResult {
  std::vector<CompanyScore> scores;
  LabelSet labels;
};
LabelResult label_panel(const PricePanel& panel, const RunConfig& cfg);

struct EmbeddingResult {
  ElasticMap map;
  Embedding internal;
  Embedding principal;
};
EmbeddingResult embed_window(const PricePanel& panel, const LabelSet& labels,
                             const RunConfig& cfg);

std::vector<PairHistogram> histograms_for_window(const PricePanel& panel,
                                                 const LabelSet& labels, const RunConfig& cfg,
                                                 std::vector<PairPartition>* partitions = nullptr);

struct PipelineResult {
  LoadedData data;
  LabelResult labeling;
  std::vector<LoocvReport> reports;
  std::vector<PairPartition> partitions;
  std::vector<PairHistogram> histograms;
  EmbeddingResult embedding;
  std::vector<std::filesystem::path> files;
};

/// Runs ingest through embedding and writes every artifact into cfg.out.
/// On failure no partially written artifact is left behind.
PipelineResult run_pipeline(const RunConfig& cfg, std::ostream* summary = nullptr);

void print_summary(std::ostream& os, const std::vector<LoocvReport>& reports);

// ---- SVG ----------------------------------------------------------------

std::string error_curve_svg(const std::vector<LoocvReport>& reports, bool separate,
                            std::optional<Measure> only = std::nullopt);
std::string histogram_svg(const PairHistogram& h, bool cross_class);
std::string scatter_svg(const Embedding& e, const std::string& title);

/// Writes the figure set; returns the files written (none for empty input).
std::vector<std::filesystem::path> emit_plots(const std::vector<LoocvReport>& reports,
                                              const std::vector<PairHistogram>& histograms,
                                              const std::vector<Embedding>& embeddings,
                                              const std::filesystem::path& out_dir);

}  // namespace wlsep
