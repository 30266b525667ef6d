// wlsep: winner/loser separability analysis of stock-index components.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "wlsep/error.hpp"
#include "wlsep/report.hpp"

namespace fs = std::filesystem;
using namespace wlsep;

namespace {

/// String-valued flags that map one-to-one onto config keys.
struct FlagSet {
  std::map<std::string, std::string> values;
  std::string config_path;
  std::string labels_path;

  void add(CLI::App* app, const std::string& flag, const std::string& key, const std::string& help) {
    app->add_option_function<std::string>(
        flag, [this, key](const std::string& v) { values[key] = v; }, help);
  }
};

void add_common(CLI::App* app, FlagSet& f) {
  app->add_option("--config", f.config_path, "flat key = value config file");
  f.add(app, "--data", "data", "directory of per-company CSVs, or one wide CSV");
  f.add(app, "--calendar", "calendar", "index calendar CSV (column 'date')");
  f.add(app, "--windows", "windows", "initial windows in months, e.g. 3,6,9,12,15,18");
  f.add(app, "--measure", "measure", "distance|proximity|both");
  f.add(app, "--k", "k", "neighbours in the k-NN vote");
  f.add(app, "--bins", "bins", "histogram bin count");
  f.add(app, "--out", "out", "output directory");
  f.add(app, "--seed", "seed", "synthetic generator seed");
  f.add(app, "--synth", "synth", "use generated data: planted|null");
  f.add(app, "--begin-window", "begin_window", "label frame FIRST:LAST (ISO dates)");
  f.add(app, "--end-window", "end_window", "label frame FIRST:LAST (ISO dates)");
  f.add(app, "--label-months", "label_months", "label frame length when windows are not given");
  f.add(app, "--anchor", "anchor", "start date the initial windows are measured from");
  f.add(app, "--threshold", "missing_threshold", "maximum missing fraction per company");
  f.add(app, "--fill", "fill", "missing-value fill: cross|temporal");
}

RunConfig build_config(const FlagSet& f) {
  std::map<std::string, std::string> kv;
  if (!f.config_path.empty()) kv = read_config_file(f.config_path);
  for (const auto& [k, v] : f.values) kv[k] = v;
  RunConfig cfg;
  apply_config(cfg, kv);
  validate(cfg);
  return cfg;
}

void ensure_out(const RunConfig& cfg) {
  std::error_code ec;
  fs::create_directories(cfg.out, ec);
  if (ec) fail(ErrorKind::Io, "cannot create " + cfg.out.string() + ": " + ec.message());
}

LabelSet labels_for(const FlagSet& f, const PricePanel& panel, const RunConfig& cfg) {
  if (!f.labels_path.empty()) return read_labels_csv(f.labels_path);
  return label_panel(panel, cfg).labels;
}

int cmd_ingest(const FlagSet& f) {
  const RunConfig cfg = build_config(f);
  const LoadedData d = load_data(cfg);
  ensure_out(cfg);
  write_panel_csv(cfg.out / "panel.csv", d.panel);
  write_returns_csv(cfg.out / "returns.csv", compute_log_returns(d.panel));
  std::string dropped = "ticker\n";
  for (const auto& t : d.dropped) dropped += t + "\n";
  std::ofstream(cfg.out / "dropped.csv") << dropped;
  std::cout << d.panel.cols() << " companies kept, " << d.dropped.size() << " dropped, "
            << d.panel.rows() << " trading days\n";
  return 0;
}

int cmd_label(const FlagSet& f) {
  const RunConfig cfg = build_config(f);
  const LoadedData d = load_data(cfg);
  const LabelResult l = label_panel(d.panel, cfg);
  ensure_out(cfg);
  write_labels_csv(cfg.out / "labels.csv", l.labels, l.scores);
  std::cout << l.labels.winners.size() << " winners, " << l.labels.losers.size() << " losers, "
            << l.labels.middle.size() << " middle\n";
  return 0;
}

int cmd_analyze(const FlagSet& f) {
  const RunConfig cfg = build_config(f);
  const LoadedData d = load_data(cfg);
  const LabelSet labels = labels_for(f, d.panel, cfg);
  const auto reports = loocv_sweep(d.panel, labels, cfg.windows, cfg.measures, cfg.knn, cfg.anchor);
  ensure_out(cfg);
  write_reports_csv(cfg.out / "reports.csv", reports);
  std::ofstream(cfg.out / "reports.json") << reports_to_json(reports).dump(2) << "\n";
  emit_plots(reports, {}, {}, cfg.out);
  print_summary(std::cout, reports);
  return 0;
}

int cmd_hist(const FlagSet& f) {
  const RunConfig cfg = build_config(f);
  const LoadedData d = load_data(cfg);
  const LabelSet labels = labels_for(f, d.panel, cfg);
  std::vector<PairPartition> parts;
  const auto hists = histograms_for_window(d.panel, labels, cfg, &parts);
  ensure_out(cfg);
  for (std::size_t i = 0; i < hists.size(); ++i) {
    write_pair_partition_csv(cfg.out / (std::string("pairs_") + to_string(hists[i].measure) + ".csv"),
                             parts[i]);
  }
  emit_plots({}, hists, {}, cfg.out);
  for (std::size_t i = 0; i < hists.size(); ++i) {
    std::cout << to_string(hists[i].measure) << ": " << parts[i].ww.size() << " ww, "
              << parts[i].ll.size() << " ll, " << parts[i].wl.size() << " wl pairs\n";
  }
  return 0;
}

int cmd_embed(const FlagSet& f) {
  const RunConfig cfg = build_config(f);
  const LoadedData d = load_data(cfg);
  const LabelSet labels = labels_for(f, d.panel, cfg);
  const EmbeddingResult e = embed_window(d.panel, labels, cfg);
  for (const auto& w : e.map.warnings) std::cerr << "warning: " << w << "\n";
  ensure_out(cfg);
  write_embedding_csv(cfg.out / "embedding_2d.csv", e.internal);
  write_embedding_csv(cfg.out / "embedding_3d.csv", e.principal);
  write_energy_csv(cfg.out / "energy.csv", e.map.energy_trace);
  emit_plots({}, {}, {e.internal, e.principal}, cfg.out);
  std::cout << "elastic map: " << e.map.energy_trace.size() - 1 << " iterations, final energy "
            << e.map.energy_trace.back() << "\n";
  return 0;
}

int cmd_synth(const FlagSet& f) {
  RunConfig cfg = build_config(f);
  if (cfg.data) fail(ErrorKind::InvalidConfig, "synth does not read --data");
  const LoadedData d = load_data(cfg);
  ensure_out(cfg);
  write_panel_csv(cfg.out / "panel.csv", d.panel);
  if (d.planted_labels) write_labels_csv(cfg.out / "true_labels.csv", *d.planted_labels, {});
  std::cout << "wrote " << d.panel.cols() << " companies x " << d.panel.rows() << " days to "
            << (cfg.out / "panel.csv").string() << "\n";
  return 0;
}

int cmd_run(const FlagSet& f) {
  const RunConfig cfg = build_config(f);
  const PipelineResult r = run_pipeline(cfg, &std::cout);
  for (const auto& w : r.embedding.map.warnings) std::cerr << "warning: " << w << "\n";
  std::cout << r.files.size() << " artifacts written to " << cfg.out.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Winner/loser separability of stock-index components"};
  app.require_subcommand(1);

  struct Sub {
    const char* name;
    const char* help;
    int (*run)(const FlagSet&);
    FlagSet flags;
    CLI::App* app = nullptr;
  };
  std::vector<Sub> subs{
      {"ingest", "align, clean and write the price panel and log-returns", cmd_ingest, {}},
      {"label", "score companies and label winners/losers by thirds", cmd_label, {}},
      {"analyze", "LOOCV k-NN error sweep over initial windows", cmd_analyze, {}},
      {"hist", "in-class / cross-class distance histograms", cmd_hist, {}},
      {"embed", "elastic-map and principal-component embeddings", cmd_embed, {}},
      {"synth", "generate a synthetic price panel", cmd_synth, {}},
      {"run", "full pipeline with every artifact", cmd_run, {}},
  };
  for (auto& s : subs) {
    s.app = app.add_subcommand(s.name, s.help);
    add_common(s.app, s.flags);
    if (std::string(s.name) == "analyze" || std::string(s.name) == "hist" ||
        std::string(s.name) == "embed") {
      s.app->add_option("--labels", s.flags.labels_path, "labels CSV from `wlsep label`");
    }
    if (std::string(s.name) == "synth" || std::string(s.name) == "run") {
      s.flags.add(s.app, "--winners", "synth_winners", "planted winners");
      s.flags.add(s.app, "--losers", "synth_losers", "planted losers");
      s.flags.add(s.app, "--middle", "synth_middle", "unstructured middle companies");
      s.flags.add(s.app, "--companies", "synth_companies", "companies in a null panel");
      s.flags.add(s.app, "--days", "synth_days", "price rows to generate");
      s.flags.add(s.app, "--intra-rho", "intra_rho", "within-class return correlation");
      s.flags.add(s.app, "--cross-rho", "cross_rho", "cross-class return correlation");
      s.flags.add(s.app, "--volatility", "volatility", "daily return standard deviation");
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    for (auto& s : subs) {
      if (s.app->parsed()) {
        // `synth` defaults to a planted panel when no mode is given.
        if (std::string(s.name) == "synth" && !s.flags.values.count("synth")) {
          s.flags.values["synth"] = "planted";
        }
        return s.run(s.flags);
      }
    }
  } catch (const Error& e) {
    std::cerr << "wlsep: " << to_string(e.kind()) << ": " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "wlsep: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
