#include "wlsep/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "text_util.hpp"
#include "wlsep/error.hpp"

namespace wlsep {

namespace {

bool is_missing_token(std::string_view s) { return s.empty() || s == "NA"; }

void require_increasing(const std::vector<Date>& dates, const std::string& what) {
  for (std::size_t i = 1; i < dates.size(); ++i) {
    if (!(dates[i - 1] < dates[i])) {
      fail(ErrorKind::InvalidInput,
           what + ": dates not strictly increasing at " + format_date(dates[i]));
    }
  }
}

std::string wide_csv(const std::vector<Date>& dates, const std::vector<std::string>& tickers,
                     const Eigen::MatrixXd& m) {
  std::ostringstream os;
  os << "date";
  for (const auto& t : tickers) os << ',' << t;
  os << '\n';
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    os << format_date(dates[static_cast<std::size_t>(r)]);
    for (Eigen::Index c = 0; c < m.cols(); ++c) os << ',' << detail::format_double(m(r, c));
    os << '\n';
  }
  return os.str();
}

/// Number of leading rows inside the initial window.
Eigen::Index window_rows(const std::vector<Date>& dates, int months, std::optional<Date> anchor) {
  if (months <= 0) fail(ErrorKind::InvalidInput, "window must be a positive number of months");
  if (dates.empty()) fail(ErrorKind::Data, "cannot slice an empty series");
  const Date start = anchor.value_or(dates.front());
  const Date cutoff = add_months(start, months);
  const Date last = dates.back();
  if (std::chrono::sys_days{last} + std::chrono::days{kWindowSlackDays} <
      std::chrono::sys_days{cutoff}) {
    fail(ErrorKind::Data, std::to_string(months) + "-month window from " + format_date(start) +
                              " extends past the last date " + format_date(last));
  }
  return std::lower_bound(dates.begin(), dates.end(), cutoff) - dates.begin();
}

}  // namespace

std::size_t RawSeries::missing_count() const {
  return static_cast<std::size_t>(
      std::count_if(closes.begin(), closes.end(), [](const auto& c) { return !c.has_value(); }));
}

PricePanel PricePanel::select(const std::vector<std::string>& keep) const {
  PricePanel out;
  out.dates = dates;
  out.tickers = keep;
  out.prices.resize(prices.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t j = 0; j < keep.size(); ++j) {
    const auto it = std::find(tickers.begin(), tickers.end(), keep[j]);
    if (it == tickers.end()) fail(ErrorKind::InvalidInput, "unknown ticker " + keep[j]);
    out.prices.col(static_cast<Eigen::Index>(j)) = prices.col(it - tickers.begin());
  }
  return out;
}

void validate(const RawSeries& series) {
  if (series.dates.size() != series.closes.size()) {
    fail(ErrorKind::InvalidInput, series.ticker + ": dates and closes differ in length");
  }
  require_increasing(series.dates, series.ticker);
  for (std::size_t i = 0; i < series.closes.size(); ++i) {
    const auto& c = series.closes[i];
    if (c && !(std::isfinite(*c) && *c > 0.0)) {
      fail(ErrorKind::Data, series.ticker + ": non-positive price on " + format_date(series.dates[i]));
    }
  }
}

void validate(const PricePanel& panel) {
  if (panel.prices.rows() != static_cast<Eigen::Index>(panel.dates.size()) ||
      panel.prices.cols() != static_cast<Eigen::Index>(panel.tickers.size())) {
    fail(ErrorKind::InvalidInput, "panel shape does not match its dates/tickers");
  }
  require_increasing(panel.dates, "panel");
  if (!(panel.prices.array() > 0.0).all() || !panel.prices.allFinite()) {
    fail(ErrorKind::Data, "panel contains non-positive or non-finite prices");
  }
}

RawSeries align_to_index_calendar(const RawSeries& series, const std::vector<Date>& index_dates) {
  if (index_dates.empty()) fail(ErrorKind::InvalidInput, "empty index calendar");
  require_increasing(index_dates, "index calendar");
  validate(series);

  RawSeries out;
  out.ticker = series.ticker;
  out.dates = index_dates;
  out.closes.assign(index_dates.size(), std::nullopt);
  // Both date lists are sorted: merge walk.
  std::size_t j = 0;
  for (std::size_t i = 0; i < index_dates.size(); ++i) {
    while (j < series.dates.size() && series.dates[j] < index_dates[i]) ++j;
    if (j < series.dates.size() && series.dates[j] == index_dates[i]) out.closes[i] = series.closes[j];
  }
  return out;
}

CleanResult clean_panel(const std::vector<RawSeries>& aligned, double missing_threshold,
                        FillMode fill) {
  if (!(missing_threshold >= 0.0 && missing_threshold <= 1.0)) {
    fail(ErrorKind::InvalidConfig, "missing threshold must lie in [0, 1]");
  }
  if (aligned.empty()) fail(ErrorKind::Data, "no company series supplied");
  const auto& calendar = aligned.front().dates;
  if (calendar.empty()) fail(ErrorKind::Data, "empty calendar");

  CleanResult result;
  std::vector<const RawSeries*> kept;
  for (const auto& s : aligned) {
    validate(s);
    if (s.dates != calendar) {
      fail(ErrorKind::InvalidInput, s.ticker + " is not aligned to the shared calendar");
    }
    const double frac = static_cast<double>(s.missing_count()) / static_cast<double>(s.size());
    if (frac > missing_threshold) {
      result.dropped.push_back(s.ticker);
    } else {
      kept.push_back(&s);
    }
  }
  if (kept.empty()) fail(ErrorKind::Data, "every company exceeded the missing-value threshold");

  const auto rows = static_cast<Eigen::Index>(calendar.size());
  const auto cols = static_cast<Eigen::Index>(kept.size());
  auto& panel = result.panel;
  panel.dates = calendar;
  panel.prices.resize(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c) panel.tickers.push_back(kept[c]->ticker);

  std::vector<double> temporal_mean(kept.size(), 0.0);
  if (fill == FillMode::TemporalMean) {
    for (std::size_t c = 0; c < kept.size(); ++c) {
      double sum = 0.0;
      int n = 0;
      for (const auto& v : kept[c]->closes) {
        if (v) {
          sum += *v;
          ++n;
        }
      }
      if (n == 0) fail(ErrorKind::Data, kept[c]->ticker + " has no observed prices");
      temporal_mean[c] = sum / n;
    }
  }

  for (Eigen::Index r = 0; r < rows; ++r) {
    double sum = 0.0;
    int n = 0;
    for (const auto* s : kept) {
      if (const auto& v = s->closes[static_cast<std::size_t>(r)]) {
        sum += *v;
        ++n;
      }
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      const auto& v = kept[static_cast<std::size_t>(c)]->closes[static_cast<std::size_t>(r)];
      if (v) {
        panel.prices(r, c) = *v;
      } else if (fill == FillMode::TemporalMean) {
        panel.prices(r, c) = temporal_mean[static_cast<std::size_t>(c)];
      } else {
        if (n == 0) {
          fail(ErrorKind::Data, "no surviving company has a price on " +
                                    format_date(calendar[static_cast<std::size_t>(r)]));
        }
        panel.prices(r, c) = sum / n;
      }
    }
  }
  return result;
}

ReturnMatrix compute_log_returns(const PricePanel& panel) {
  validate(panel);
  if (panel.rows() < 2) fail(ErrorKind::Data, "log-returns need at least two price rows");
  ReturnMatrix out;
  out.dates.assign(panel.dates.begin() + 1, panel.dates.end());
  out.tickers = panel.tickers;
  const auto n = panel.rows() - 1;
  out.returns = (panel.prices.bottomRows(n).array() / panel.prices.topRows(n).array()).log().matrix();
  return out;
}

PricePanel slice_initial_window(const PricePanel& panel, int months, std::optional<Date> anchor) {
  const auto n = window_rows(panel.dates, months, anchor);
  PricePanel out;
  out.dates.assign(panel.dates.begin(), panel.dates.begin() + n);
  out.tickers = panel.tickers;
  out.prices = panel.prices.topRows(n);
  return out;
}

ReturnMatrix slice_initial_window(const ReturnMatrix& returns, int months,
                                  std::optional<Date> anchor) {
  const auto n = window_rows(returns.dates, months, anchor);
  ReturnMatrix out;
  out.dates.assign(returns.dates.begin(), returns.dates.begin() + n);
  out.tickers = returns.tickers;
  out.returns = returns.returns.topRows(n);
  return out;
}

// ---- file formats -------------------------------------------------------

RawSeries read_company_csv(const std::filesystem::path& path, std::string ticker) {
  const auto lines = detail::read_lines(path);
  if (lines.empty()) fail(ErrorKind::Data, path.string() + " is empty");
  auto header = detail::split_csv_line(lines.front());
  std::size_t date_col = 0, close_col = 1;
  const bool has_header = header.size() >= 2 && header[0] != "" &&
                          !(header[0].size() == 10 && header[0][4] == '-');
  if (has_header) {
    for (std::size_t i = 0; i < header.size(); ++i) {
      std::string h = header[i];
      std::transform(h.begin(), h.end(), h.begin(), ::tolower);
      if (h == "date") date_col = i;
      if (h == "close") close_col = i;
    }
  }
  RawSeries s;
  s.ticker = std::move(ticker);
  for (std::size_t li = has_header ? 1 : 0; li < lines.size(); ++li) {
    const auto fields = detail::split_csv_line(lines[li]);
    if (fields.size() <= date_col) {
      fail(ErrorKind::Data, path.string() + ":" + std::to_string(li + 1) + ": missing date");
    }
    s.dates.push_back(parse_date(fields[date_col]));
    const std::string_view close = close_col < fields.size() ? std::string_view(fields[close_col]) : "";
    if (is_missing_token(close)) {
      s.closes.emplace_back();
    } else {
      s.closes.emplace_back(detail::parse_double(close));
    }
  }
  validate(s);
  return s;
}

std::vector<Date> read_calendar_csv(const std::filesystem::path& path) {
  const auto lines = detail::read_lines(path);
  std::vector<Date> dates;
  for (std::size_t li = 0; li < lines.size(); ++li) {
    const auto first = detail::split_csv_line(lines[li]).front();
    if (li == 0 && first == "date") continue;
    dates.push_back(parse_date(first));
  }
  if (dates.empty()) fail(ErrorKind::Data, path.string() + " holds no dates");
  require_increasing(dates, path.string());
  return dates;
}

std::vector<RawSeries> read_wide_csv(const std::filesystem::path& path) {
  const auto lines = detail::read_lines(path);
  if (lines.size() < 2) fail(ErrorKind::Data, path.string() + " has no data rows");
  const auto header = detail::split_csv_line(lines.front());
  if (header.size() < 2) fail(ErrorKind::Data, path.string() + " has no ticker columns");
  std::vector<RawSeries> out(header.size() - 1);
  for (std::size_t c = 1; c < header.size(); ++c) out[c - 1].ticker = header[c];
  for (std::size_t li = 1; li < lines.size(); ++li) {
    const auto fields = detail::split_csv_line(lines[li]);
    const Date d = parse_date(fields.front());
    for (std::size_t c = 1; c < header.size(); ++c) {
      auto& s = out[c - 1];
      s.dates.push_back(d);
      if (c >= fields.size() || is_missing_token(fields[c])) {
        s.closes.emplace_back();
      } else {
        s.closes.emplace_back(detail::parse_double(fields[c]));
      }
    }
  }
  for (const auto& s : out) validate(s);
  return out;
}

std::vector<RawSeries> read_company_dir(const std::filesystem::path& dir,
                                        const std::filesystem::path& calendar) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) fail(ErrorKind::Io, "data directory not found: " + dir.string());
  std::map<std::string, fs::path> files;
  std::error_code ec;
  const auto cal = fs::weakly_canonical(calendar, ec);
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".csv") continue;
    if (!ec && fs::weakly_canonical(entry.path()) == cal) continue;
    files.emplace(entry.path().stem().string(), entry.path());
  }
  if (files.empty()) fail(ErrorKind::Data, "no company CSV files in " + dir.string());
  std::vector<RawSeries> out;
  for (const auto& [ticker, path] : files) out.push_back(read_company_csv(path, ticker));
  return out;
}

void write_panel_csv(const std::filesystem::path& path, const PricePanel& panel) {
  detail::write_text(path, wide_csv(panel.dates, panel.tickers, panel.prices));
}

void write_returns_csv(const std::filesystem::path& path, const ReturnMatrix& returns) {
  detail::write_text(path, wide_csv(returns.dates, returns.tickers, returns.returns));
}

}  // namespace wlsep
