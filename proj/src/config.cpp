#include <algorithm>
#include <charconv>

#include "text_util.hpp"
#include "wlsep/error.hpp"
#include "wlsep/report.hpp"

namespace wlsep {

namespace {

int to_int(const std::string& key, std::string_view v) {
  v = detail::trim(v);
  int out = 0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc{} || res.ptr != v.data() + v.size()) {
    fail(ErrorKind::InvalidConfig, key + ": expected an integer, got '" + std::string(v) + "'");
  }
  return out;
}

double to_double(const std::string& key, std::string_view v) {
  try {
    return detail::parse_double(v);
  } catch (const Error&) {
    fail(ErrorKind::InvalidConfig, key + ": expected a number, got '" + std::string(v) + "'");
  }
}

template <typename F>
auto as_config_error(const std::string& key, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    fail(ErrorKind::InvalidConfig, key + ": " + e.what());
  }
}

SynthSpec& synth_of(RunConfig& cfg) {
  if (!cfg.synth) {
    cfg.synth = SynthSpec{};
    cfg.synth->n_middle = 16;
    cfg.synth->n_days = 783;  // about three years of weekdays
  }
  return *cfg.synth;
}

}  // namespace

std::vector<int> parse_windows(std::string_view text) {
  std::vector<int> out;
  for (const auto& f : detail::split_csv_line(text)) {
    if (f.empty()) continue;
    out.push_back(to_int("windows", f));
  }
  if (out.empty()) fail(ErrorKind::InvalidConfig, "window list is empty");
  return out;
}

std::vector<Measure> parse_measures(std::string_view text) {
  text = detail::trim(text);
  if (text == "both") return {Measure::Distance, Measure::Proximity};
  return {parse_measure(text)};
}

DateWindow parse_date_window(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    fail(ErrorKind::InvalidConfig, "date window must be FIRST:LAST, got '" + std::string(text) + "'");
  }
  return as_config_error("date window", [&] {
    return DateWindow{parse_date(detail::trim(text.substr(0, colon))),
                      parse_date(detail::trim(text.substr(colon + 1)))};
  });
}

std::map<std::string, std::string> read_config_file(const std::filesystem::path& path) {
  std::map<std::string, std::string> kv;
  std::vector<std::string> lines;
  try {
    lines = detail::read_lines(path);
  } catch (const Error& e) {
    fail(ErrorKind::InvalidConfig, e.what());
  }
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::string_view line = lines[i];
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      fail(ErrorKind::InvalidConfig,
           path.string() + ":" + std::to_string(i + 1) + ": expected key = value");
    }
    kv[std::string(detail::trim(line.substr(0, eq)))] = std::string(detail::trim(line.substr(eq + 1)));
  }
  return kv;
}

void apply_config(RunConfig& cfg, const std::map<std::string, std::string>& kv) {
  for (const auto& [key, v] : kv) {
    if (key == "data") {
      cfg.data = v;
    } else if (key == "calendar") {
      cfg.calendar = v;
    } else if (key == "synth") {
      if (v == "planted") {
        synth_of(cfg);
        cfg.synth_null = false;
      } else if (v == "null") {
        synth_of(cfg);
        cfg.synth_null = true;
      } else {
        fail(ErrorKind::InvalidConfig, "synth must be 'planted' or 'null'");
      }
    } else if (key == "seed") {
      synth_of(cfg).seed = static_cast<std::uint64_t>(to_int(key, v));
    } else if (key == "synth_winners") {
      synth_of(cfg).n_winners = to_int(key, v);
    } else if (key == "synth_losers") {
      synth_of(cfg).n_losers = to_int(key, v);
    } else if (key == "synth_middle") {
      synth_of(cfg).n_middle = to_int(key, v);
    } else if (key == "synth_days") {
      synth_of(cfg).n_days = to_int(key, v);
    } else if (key == "synth_companies") {
      cfg.synth_null_companies = to_int(key, v);
    } else if (key == "intra_rho") {
      synth_of(cfg).intra_rho = to_double(key, v);
    } else if (key == "cross_rho") {
      synth_of(cfg).cross_rho = to_double(key, v);
    } else if (key == "drift_winner") {
      synth_of(cfg).drift_winner = to_double(key, v);
    } else if (key == "drift_loser") {
      synth_of(cfg).drift_loser = to_double(key, v);
    } else if (key == "volatility") {
      synth_of(cfg).volatility = to_double(key, v);
    } else if (key == "synth_start") {
      synth_of(cfg).start = as_config_error(key, [&] { return parse_date(v); });
    } else if (key == "begin_window") {
      cfg.begin_window = parse_date_window(v);
    } else if (key == "end_window") {
      cfg.end_window = parse_date_window(v);
    } else if (key == "label_months") {
      cfg.label_months = to_int(key, v);
    } else if (key == "anchor") {
      cfg.anchor = as_config_error(key, [&] { return parse_date(v); });
    } else if (key == "windows") {
      cfg.windows = parse_windows(v);
    } else if (key == "measure") {
      cfg.measures = parse_measures(v);
    } else if (key == "k") {
      cfg.knn.k = to_int(key, v);
    } else if (key == "bins") {
      cfg.bins = to_int(key, v);
    } else if (key == "missing_threshold") {
      cfg.missing_threshold = to_double(key, v);
    } else if (key == "fill") {
      if (v == "cross") {
        cfg.fill = FillMode::CrossSectionalMean;
      } else if (v == "temporal") {
        cfg.fill = FillMode::TemporalMean;
      } else {
        fail(ErrorKind::InvalidConfig, "fill must be 'cross' or 'temporal'");
      }
    } else if (key == "grid_rows") {
      cfg.elastic.grid_rows = to_int(key, v);
    } else if (key == "grid_cols") {
      cfg.elastic.grid_cols = to_int(key, v);
    } else if (key == "lambda") {
      cfg.elastic.lambda = to_double(key, v);
    } else if (key == "mu") {
      cfg.elastic.mu = to_double(key, v);
    } else if (key == "max_iterations") {
      cfg.elastic.max_iterations = to_int(key, v);
    } else if (key == "tolerance") {
      cfg.elastic.tolerance = to_double(key, v);
    } else if (key == "embed_on") {
      if (v != "labeled" && v != "all") fail(ErrorKind::InvalidConfig, "embed_on must be 'labeled' or 'all'");
      cfg.embed_all = v == "all";
    } else if (key == "out") {
      cfg.out = v;
    } else {
      fail(ErrorKind::InvalidConfig, "unknown config key '" + key + "'");
    }
  }
}

void validate(const RunConfig& cfg) {
  if (!cfg.data && !cfg.synth) fail(ErrorKind::InvalidConfig, "no input: give a data path or a synth spec");
  if (cfg.windows.empty()) fail(ErrorKind::InvalidConfig, "window list is empty");
  for (std::size_t i = 0; i < cfg.windows.size(); ++i) {
    if (cfg.windows[i] <= 0) fail(ErrorKind::InvalidConfig, "windows must be positive");
    if (i > 0 && cfg.windows[i] <= cfg.windows[i - 1]) {
      fail(ErrorKind::InvalidConfig, "windows must be strictly increasing");
    }
  }
  if (cfg.measures.empty()) fail(ErrorKind::InvalidConfig, "no measure selected");
  if (cfg.knn.k < 1) fail(ErrorKind::InvalidConfig, "k must be at least 1");
  if (cfg.bins < 1) fail(ErrorKind::InvalidConfig, "bins must be at least 1");
  if (cfg.label_months < 1) fail(ErrorKind::InvalidConfig, "label_months must be positive");
  if (!(cfg.missing_threshold >= 0.0 && cfg.missing_threshold <= 1.0)) {
    fail(ErrorKind::InvalidConfig, "missing_threshold must lie in [0, 1]");
  }
  for (const auto* w : {&cfg.begin_window, &cfg.end_window}) {
    if (*w && (*w)->last < (*w)->first) fail(ErrorKind::InvalidConfig, "label window is reversed");
  }
  if (cfg.begin_window && cfg.end_window && !(cfg.begin_window->last < cfg.end_window->first)) {
    fail(ErrorKind::InvalidConfig, "begin label window must end before the end window starts");
  }
  if (cfg.begin_window.has_value() != cfg.end_window.has_value()) {
    fail(ErrorKind::InvalidConfig, "give both label windows or neither");
  }
  as_config_error("elastic map", [&] {
    validate(cfg.elastic);
    return 0;
  });
  if (cfg.synth && !cfg.data) {
    if (cfg.synth_null) {
      if (cfg.synth_null_companies < 3) fail(ErrorKind::InvalidConfig, "synth_companies must be at least 3");
    } else {
      as_config_error("synth", [&] {
        validate(*cfg.synth);
        return 0;
      });
    }
  }
}

}  // namespace wlsep
