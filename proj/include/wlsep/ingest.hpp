#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "wlsep/date.hpp"

namespace wlsep {

/// One company's closing prices as delivered, before calendar alignment.
/// A missing close is an empty optional.
struct RawSeries {
  std::string ticker;
  std::vector<Date> dates;
  std::vector<std::optional<double>> closes;

  std::size_t size() const { return dates.size(); }
  std::size_t missing_count() const;
};

/// Cleaned closing prices, one row per trading day (oldest first) and one
/// column per company. Every entry is finite and strictly positive.
struct PricePanel {
  std::vector<Date> dates;
  std::vector<std::string> tickers;
  Eigen::MatrixXd prices;

  Eigen::Index rows() const { return prices.rows(); }
  Eigen::Index cols() const { return prices.cols(); }
  /// Column subset in the given ticker order.
  PricePanel select(const std::vector<std::string>& keep) const;
};

/// Daily log-returns. Row t holds ln(P[t+1] / P[t]) and is dated by the later day,
/// so there is one row fewer than in the source panel.
struct ReturnMatrix {
  std::vector<Date> dates;
  std::vector<std::string> tickers;
  Eigen::MatrixXd returns;

  Eigen::Index rows() const { return returns.rows(); }
  Eigen::Index cols() const { return returns.cols(); }
};

enum class FillMode {
  CrossSectionalMean,  // mean over companies of the available closes on that date
  TemporalMean,        // mean of the company's own available closes
};

struct CleanResult {
  PricePanel panel;
  std::vector<std::string> dropped;
};

void validate(const RawSeries& series);
void validate(const PricePanel& panel);

/// Re-indexes a series onto the index calendar: observations on non-index
/// dates are deleted and index dates the series lacks become missing.
RawSeries align_to_index_calendar(const RawSeries& series,
                                  const std::vector<Date>& index_dates);

/// Drops companies whose missing fraction exceeds `missing_threshold`, then
/// fills the remaining gaps. Input series must already share one calendar.
CleanResult clean_panel(const std::vector<RawSeries>& aligned,
                        double missing_threshold = 0.20,
                        FillMode fill = FillMode::CrossSectionalMean);

ReturnMatrix compute_log_returns(const PricePanel& panel);

/// Rows dated strictly before `anchor + months` calendar months, where the
/// anchor defaults to the first row's date. A window reaching more than
/// `kWindowSlackDays` past the last available date is an error.
PricePanel slice_initial_window(const PricePanel& panel, int months,
                                std::optional<Date> anchor = std::nullopt);
ReturnMatrix slice_initial_window(const ReturnMatrix& returns, int months,
                                  std::optional<Date> anchor = std::nullopt);

inline constexpr int kWindowSlackDays = 7;

// ---- file formats -------------------------------------------------------

/// `date,close` per company; empty or `NA` closes are missing.
RawSeries read_company_csv(const std::filesystem::path& path, std::string ticker);
/// Index calendar with a `date` column (first column is used).
std::vector<Date> read_calendar_csv(const std::filesystem::path& path);
/// Wide layout `date,T1,T2,...`; returns one RawSeries per ticker column.
std::vector<RawSeries> read_wide_csv(const std::filesystem::path& path);

/// Loads every `*.csv` in `dir` except the calendar file itself; the file
/// stem becomes the ticker. Series are returned in ticker order.
std::vector<RawSeries> read_company_dir(const std::filesystem::path& dir,
                                        const std::filesystem::path& calendar);

void write_panel_csv(const std::filesystem::path& path, const PricePanel& panel);
void write_returns_csv(const std::filesystem::path& path, const ReturnMatrix& returns);

}  // namespace wlsep
