#pragma once

#include <chrono>
#include <string>
#include <string_view>

namespace wlsep {

using Date = std::chrono::year_month_day;

/// Parses `YYYY-MM-DD`. Throws Error(InvalidInput) on malformed or impossible dates.
Date parse_date(std::string_view text);

std::string format_date(const Date& d);

/// Calendar-month shift. Days past the end of the target month clamp to its
/// last day (2009-01-31 + 1 month = 2009-02-28).
Date add_months(const Date& d, int months);

Date add_days(const Date& d, int days);

}  // namespace wlsep
