#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "wlsep/date.hpp"
#include "wlsep/ingest.hpp"

namespace wlsep {

enum class Label { Winner, Loser, Middle };

const char* to_string(Label label) noexcept;
Label parse_label(std::string_view text);

struct CompanyScore {
  std::string ticker;
  double avp_begin = 0.0;
  double avp_end = 0.0;
  double growth = 0.0;  // avp_end / avp_begin
};

/// Winner / loser / middle partition. Each list keeps the descending growth
/// order produced by label_thirds.
struct LabelSet {
  std::vector<std::string> winners;
  std::vector<std::string> losers;
  std::vector<std::string> middle;

  /// Label of `ticker`; Middle for tickers absent from all lists.
  Label label_of(std::string_view ticker) const;
  bool contains(std::string_view ticker) const;
  std::size_t size() const { return winners.size() + losers.size() + middle.size(); }
};

/// Inclusive date range.
struct DateWindow {
  Date first;
  Date last;
};

double average_price(const std::vector<double>& prices);

std::vector<CompanyScore> score_companies(const PricePanel& panel,
                                          const DateWindow& begin_window,
                                          const DateWindow& end_window);

/// Sorts by growth descending (ticker ascending on ties); the first
/// floor(N/3) are winners and the last floor(N/3) losers.
LabelSet label_thirds(const std::vector<CompanyScore>& scores);

/// First and last `months` calendar months of the panel.
std::pair<DateWindow, DateWindow> default_label_windows(const PricePanel& panel,
                                                        int months = 3);

/// `ticker,label,growth`; growth is looked up from `scores` by ticker.
void write_labels_csv(const std::filesystem::path& path, const LabelSet& labels,
                      const std::vector<CompanyScore>& scores);
LabelSet read_labels_csv(const std::filesystem::path& path);

}  // namespace wlsep
