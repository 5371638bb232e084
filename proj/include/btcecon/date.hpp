#pragma once

#include <chrono>
#include <string>
#include <string_view>

namespace btcecon {

using Date = std::chrono::sys_days;

/// Parses a strict ISO-8601 calendar date (YYYY-MM-DD). Throws ValidationError.
[[nodiscard]] Date parse_date(std::string_view text);

[[nodiscard]] std::string format_date(Date d);

/// Calendar addition; Feb 29 + years lands on Mar 1 in non-leap years.
[[nodiscard]] Date add_years(Date d, int years);

}  // namespace btcecon
