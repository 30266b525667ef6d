#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "text_util.hpp"
#include "wlsep/error.hpp"
#include "wlsep/report.hpp"

namespace wlsep {

namespace fs = std::filesystem;

LoadedData load_data(const RunConfig& cfg) {
  LoadedData out;
  if (cfg.data) {
    const fs::path& data = *cfg.data;
    std::vector<RawSeries> raw;
    std::vector<Date> calendar;
    if (fs::is_directory(data)) {
      const fs::path cal = cfg.calendar.value_or(data / "calendar.csv");
      if (!fs::exists(cal)) fail(ErrorKind::Io, "index calendar not found: " + cal.string());
      calendar = read_calendar_csv(cal);
      raw = read_company_dir(data, cal);
    } else if (fs::is_regular_file(data)) {
      raw = read_wide_csv(data);
      calendar = cfg.calendar ? read_calendar_csv(*cfg.calendar) : raw.front().dates;
    } else {
      fail(ErrorKind::Io, "input not found: " + data.string());
    }
    std::vector<RawSeries> aligned;
    aligned.reserve(raw.size());
    for (const auto& s : raw) aligned.push_back(align_to_index_calendar(s, calendar));
    auto cleaned = clean_panel(aligned, cfg.missing_threshold, cfg.fill);
    out.panel = std::move(cleaned.panel);
    out.dropped = std::move(cleaned.dropped);
  } else if (cfg.synth) {
    if (cfg.synth_null) {
      out.panel = gen_null_panel(cfg.synth_null_companies, cfg.synth->n_days, cfg.synth->volatility,
                                 cfg.synth->seed, cfg.synth->start);
    } else {
      auto planted = gen_planted_panel(*cfg.synth);
      out.panel = std::move(planted.panel);
      out.planted_labels = std::move(planted.true_labels);
    }
  } else {
    fail(ErrorKind::InvalidConfig, "no input: give a data path or a synth spec");
  }
  return out;
}

LabelResult label_panel(const PricePanel& panel, const RunConfig& cfg) {
  DateWindow begin{}, end{};
  if (cfg.begin_window && cfg.end_window) {
    begin = *cfg.begin_window;
    end = *cfg.end_window;
  } else {
    std::tie(begin, end) = default_label_windows(panel, cfg.label_months);
  }
  LabelResult out;
  out.scores = score_companies(panel, begin, end);
  out.labels = label_thirds(out.scores);
  return out;
}

std::vector<PairHistogram> histograms_for_window(const PricePanel& panel, const LabelSet& labels,
                                                 const RunConfig& cfg,
                                                 std::vector<PairPartition>* partitions) {
  const int window = cfg.windows.front();
  const ReturnMatrix r =
      compute_log_returns(slice_initial_window(labeled_subpanel(panel, labels), window, cfg.anchor));
  std::vector<PairHistogram> out;
  for (const Measure m : cfg.measures) {
    const PairPartition pp = partition_pairs(distance_matrix(r, m), labels);
    PairHistogram h = build_pair_histogram(pp, cfg.bins);
    h.measure = m;
    h.window_months = window;
    out.push_back(std::move(h));
    if (partitions) partitions->push_back(pp);
  }
  return out;
}

EmbeddingResult embed_window(const PricePanel& panel, const LabelSet& labels, const RunConfig& cfg) {
  const PricePanel source = cfg.embed_all ? panel : labeled_subpanel(panel, labels);
  const ReturnMatrix r =
      compute_log_returns(slice_initial_window(source, cfg.windows.front(), cfg.anchor));
  const Eigen::MatrixXd points = r.returns.transpose();  // one row per company
  EmbeddingResult out;
  out.map = fit_elastic_map(points, cfg.elastic);
  out.internal = embed_internal(out.map, points, r.tickers, labels);
  out.principal = embed_principal(points, r.tickers, labels, 3);
  return out;
}

void print_summary(std::ostream& os, const std::vector<LoocvReport>& reports) {
  os << "window  measure    total   winner  loser   w_sigma l_sigma errors(w+l)\n";
  for (const auto& r : reports) {
    os << std::setw(6) << r.window_months << "  " << std::left << std::setw(9)
       << to_string(r.measure) << std::right << "  " << detail::format_fixed(r.total_rate(), 4)
       << "  " << detail::format_fixed(r.winner_rate(), 4) << "  "
       << detail::format_fixed(r.loser_rate(), 4) << "  "
       << detail::format_fixed(r.winner_estimate().sigma, 4) << "  "
       << detail::format_fixed(r.loser_estimate().sigma, 4) << "  " << r.total_errors << " ("
       << r.winner_errors << "+" << r.loser_errors << ")\n";
  }
}

PipelineResult run_pipeline(const RunConfig& cfg, std::ostream* summary) {
  validate(cfg);
  PipelineResult res;
  res.data = load_data(cfg);
  res.labeling = label_panel(res.data.panel, cfg);
  const auto& labels = res.labeling.labels;
  res.reports = loocv_sweep(res.data.panel, labels, cfg.windows, cfg.measures, cfg.knn, cfg.anchor);
  res.histograms = histograms_for_window(res.data.panel, labels, cfg, &res.partitions);
  res.embedding = embed_window(res.data.panel, labels, cfg);

  const bool created_dir = !fs::exists(cfg.out);
  std::vector<fs::path>& files = res.files;
  try {
    std::error_code ec;
    fs::create_directories(cfg.out, ec);
    if (ec) fail(ErrorKind::Io, "cannot create " + cfg.out.string() + ": " + ec.message());
    auto emit = [&](const std::string& name, auto&& writer) {
      const fs::path p = cfg.out / name;
      files.push_back(p);
      writer(p);
    };
    const PricePanel& panel = res.data.panel;
    emit("panel.csv", [&](const fs::path& p) { write_panel_csv(p, panel); });
    emit("returns.csv", [&](const fs::path& p) { write_returns_csv(p, compute_log_returns(panel)); });
    emit("dropped.csv", [&](const fs::path& p) {
      std::string text = "ticker\n";
      for (const auto& t : res.data.dropped) text += t + "\n";
      detail::write_text(p, text);
    });
    emit("labels.csv", [&](const fs::path& p) { write_labels_csv(p, labels, res.labeling.scores); });
    emit("reports.csv", [&](const fs::path& p) { write_reports_csv(p, res.reports); });
    emit("reports.json", [&](const fs::path& p) {
      detail::write_text(p, reports_to_json(res.reports).dump(2) + "\n");
    });
    for (std::size_t i = 0; i < res.histograms.size(); ++i) {
      const std::string m = to_string(res.histograms[i].measure);
      emit("pairs_" + m + ".csv", [&](const fs::path& p) { write_pair_partition_csv(p, res.partitions[i]); });
    }
    emit("energy.csv", [&](const fs::path& p) { write_energy_csv(p, res.embedding.map.energy_trace); });
    emit("embedding_2d.csv", [&](const fs::path& p) { write_embedding_csv(p, res.embedding.internal); });
    emit("embedding_3d.csv", [&](const fs::path& p) { write_embedding_csv(p, res.embedding.principal); });

    std::ostringstream table;
    table << "companies: " << panel.cols() << " kept, " << res.data.dropped.size() << " dropped\n"
          << "labels: " << labels.winners.size() << " winners, " << labels.losers.size()
          << " losers, " << labels.middle.size() << " middle\n";
    if (res.data.planted_labels) {
      const auto& truth = *res.data.planted_labels;
      int agree = 0;
      for (const auto& t : labels.winners) agree += truth.label_of(t) == Label::Winner;
      for (const auto& t : labels.losers) agree += truth.label_of(t) == Label::Loser;
      table << "planted agreement: " << agree << "/" << labels.winners.size() + labels.losers.size() << "\n";
    }
    print_summary(table, res.reports);
    emit("summary.txt", [&](const fs::path& p) { detail::write_text(p, table.str()); });

    const std::vector<Embedding> embeddings{res.embedding.internal, res.embedding.principal};
    for (auto& p : emit_plots(res.reports, res.histograms, embeddings, cfg.out)) files.push_back(p);
    if (summary) *summary << table.str();
  } catch (...) {
    std::error_code ec;
    for (const auto& p : files) fs::remove(p, ec);
    if (created_dir) fs::remove(cfg.out, ec);
    throw;
  }
  return res;
}

}  // namespace wlsep
