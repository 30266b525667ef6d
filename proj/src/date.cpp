#include "wlsep/date.hpp"

#include <charconv>
#include <cstdio>

#include "wlsep/error.hpp"

namespace wlsep {

namespace {

int parse_int(std::string_view s, std::string_view whole) {
  int v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    fail(ErrorKind::InvalidInput, "malformed date '" + std::string(whole) + "'");
  }
  return v;
}

}  // namespace

Date parse_date(std::string_view text) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') {
    fail(ErrorKind::InvalidInput, "malformed date '" + std::string(text) + "' (want YYYY-MM-DD)");
  }
  const int y = parse_int(text.substr(0, 4), text);
  const int m = parse_int(text.substr(5, 2), text);
  const int d = parse_int(text.substr(8, 2), text);
  const Date date{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(m)},
                  std::chrono::day{static_cast<unsigned>(d)}};
  if (!date.ok()) fail(ErrorKind::InvalidInput, "impossible date '" + std::string(text) + "'");
  return date;
}

std::string format_date(const Date& d) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(d.year()),
                static_cast<unsigned>(d.month()), static_cast<unsigned>(d.day()));
  return buf;
}

Date add_months(const Date& d, int months) {
  const auto ym = std::chrono::year_month{d.year(), d.month()} + std::chrono::months{months};
  const auto last = std::chrono::year_month_day_last{ym.year(), std::chrono::month_day_last{ym.month()}};
  const auto day = d.day() > last.day() ? last.day() : d.day();
  return Date{ym.year(), ym.month(), day};
}

Date add_days(const Date& d, int days) {
  return Date{std::chrono::sys_days{d} + std::chrono::days{days}};
}

}  // namespace wlsep
