#include "wlsep/labeling.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

#include "text_util.hpp"
#include "wlsep/error.hpp"

namespace wlsep {

namespace {

bool in(const std::vector<std::string>& v, std::string_view t) {
  return std::find(v.begin(), v.end(), t) != v.end();
}

std::pair<Eigen::Index, Eigen::Index> row_range(const PricePanel& panel, const DateWindow& w,
                                                const char* which) {
  if (w.last < w.first) fail(ErrorKind::InvalidInput, std::string(which) + " window is reversed");
  const auto b = std::lower_bound(panel.dates.begin(), panel.dates.end(), w.first);
  const auto e = std::upper_bound(panel.dates.begin(), panel.dates.end(), w.last);
  if (panel.dates.empty() || w.first < panel.dates.front() || panel.dates.back() < w.last ||
      b >= e) {
    fail(ErrorKind::InvalidInput, std::string(which) + " window " + format_date(w.first) + ".." +
                                      format_date(w.last) + " lies outside the panel calendar");
  }
  return {b - panel.dates.begin(), e - b};
}

}  // namespace

const char* to_string(Label label) noexcept {
  switch (label) {
    case Label::Winner: return "winner";
    case Label::Loser: return "loser";
    case Label::Middle: return "middle";
  }
  return "middle";
}

Label parse_label(std::string_view text) {
  if (text == "winner") return Label::Winner;
  if (text == "loser") return Label::Loser;
  if (text == "middle") return Label::Middle;
  fail(ErrorKind::InvalidInput, "unknown label '" + std::string(text) + "'");
}

Label LabelSet::label_of(std::string_view ticker) const {
  if (in(winners, ticker)) return Label::Winner;
  if (in(losers, ticker)) return Label::Loser;
  return Label::Middle;
}

bool LabelSet::contains(std::string_view ticker) const {
  return in(winners, ticker) || in(losers, ticker) || in(middle, ticker);
}

double average_price(const std::vector<double>& prices) {
  if (prices.empty()) fail(ErrorKind::InvalidInput, "average of an empty price list");
  return std::accumulate(prices.begin(), prices.end(), 0.0) / static_cast<double>(prices.size());
}

std::vector<CompanyScore> score_companies(const PricePanel& panel, const DateWindow& begin_window,
                                          const DateWindow& end_window) {
  validate(panel);
  const auto [b0, bn] = row_range(panel, begin_window, "begin");
  const auto [e0, en] = row_range(panel, end_window, "end");
  std::vector<CompanyScore> out;
  out.reserve(panel.tickers.size());
  for (Eigen::Index c = 0; c < panel.cols(); ++c) {
    CompanyScore s;
    s.ticker = panel.tickers[static_cast<std::size_t>(c)];
    s.avp_begin = panel.prices.col(c).segment(b0, bn).mean();
    s.avp_end = panel.prices.col(c).segment(e0, en).mean();
    s.growth = s.avp_end / s.avp_begin;
    out.push_back(std::move(s));
  }
  return out;
}

LabelSet label_thirds(const std::vector<CompanyScore>& scores) {
  if (scores.size() < 3) fail(ErrorKind::InvalidInput, "labeling needs at least 3 companies");
  std::vector<const CompanyScore*> order;
  for (const auto& s : scores) order.push_back(&s);
  std::sort(order.begin(), order.end(), [](const CompanyScore* a, const CompanyScore* b) {
    if (a->growth != b->growth) return a->growth > b->growth;
    return a->ticker < b->ticker;
  });
  const std::size_t third = scores.size() / 3;
  LabelSet out;
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (i < third) {
      out.winners.push_back(order[i]->ticker);
    } else if (i >= order.size() - third) {
      out.losers.push_back(order[i]->ticker);
    } else {
      out.middle.push_back(order[i]->ticker);
    }
  }
  return out;
}

std::pair<DateWindow, DateWindow> default_label_windows(const PricePanel& panel, int months) {
  if (panel.dates.empty()) fail(ErrorKind::Data, "empty panel");
  const Date first = panel.dates.front();
  const Date last = panel.dates.back();
  const DateWindow begin{first, add_days(add_months(first, months), -1)};
  const DateWindow end{add_days(add_months(last, -months), 1), last};
  if (!(begin.last < end.first)) {
    fail(ErrorKind::Data, "panel too short for two disjoint " + std::to_string(months) +
                              "-month label frames");
  }
  return {begin, end};
}

void write_labels_csv(const std::filesystem::path& path, const LabelSet& labels,
                      const std::vector<CompanyScore>& scores) {
  std::map<std::string, double> growth;
  for (const auto& s : scores) growth[s.ticker] = s.growth;
  std::ostringstream os;
  os << "ticker,label,growth\n";
  auto emit = [&](const std::vector<std::string>& v, Label l) {
    for (const auto& t : v) {
      os << t << ',' << to_string(l) << ',';
      if (auto it = growth.find(t); it != growth.end()) os << detail::format_double(it->second);
      os << '\n';
    }
  };
  emit(labels.winners, Label::Winner);
  emit(labels.middle, Label::Middle);
  emit(labels.losers, Label::Loser);
  detail::write_text(path, os.str());
}

LabelSet read_labels_csv(const std::filesystem::path& path) {
  const auto lines = detail::read_lines(path);
  LabelSet out;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto f = detail::split_csv_line(lines[i]);
    if (f.size() < 2) fail(ErrorKind::Data, path.string() + ": malformed label row");
    switch (parse_label(f[1])) {
      case Label::Winner: out.winners.push_back(f[0]); break;
      case Label::Loser: out.losers.push_back(f[0]); break;
      case Label::Middle: out.middle.push_back(f[0]); break;
    }
  }
  return out;
}

}  // namespace wlsep
