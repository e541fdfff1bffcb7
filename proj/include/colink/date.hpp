#pragma once

#include <chrono>
#include <string>
#include <string_view>

namespace colink {

using Date = std::chrono::year_month_day;

// Parses a strict ISO "YYYY-MM-DD" calendar date. Throws Error(invalid_record).
Date parse_date(std::string_view text);

std::string format_date(Date date);

Date today();

} // namespace colink
