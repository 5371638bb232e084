#include "btcecon/date.hpp"

#include "btcecon/errors.hpp"

#include <array>
#include <charconv>
#include <cstdio>

namespace btcecon {

namespace {

bool parse_field(std::string_view s, int& out) {
    if (s.empty()) return false;
    for (char c : s)
        if (c < '0' || c > '9') return false;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && p == s.data() + s.size();
}

}  // namespace

Date parse_date(std::string_view text) {
    int y = 0, m = 0, d = 0;
    const bool shape = text.size() == 10 && text[4] == '-' && text[7] == '-';
    if (!shape || !parse_field(text.substr(0, 4), y) || !parse_field(text.substr(5, 2), m) ||
        !parse_field(text.substr(8, 2), d))
        throw ValidationError("unparseable date '" + std::string(text) + "' (expected YYYY-MM-DD)");
    const std::chrono::year_month_day ymd{std::chrono::year(y), std::chrono::month(static_cast<unsigned>(m)),
                                          std::chrono::day(static_cast<unsigned>(d))};
    if (!ymd.ok()) throw ValidationError("invalid calendar date '" + std::string(text) + "'");
    return Date(ymd);
}

std::string format_date(Date d) {
    const std::chrono::year_month_day ymd(d);
    std::array<char, 16> buf{};
    std::snprintf(buf.data(), buf.size(), "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
    return buf.data();
}

Date add_years(Date d, int years) {
    const std::chrono::year_month_day shifted = std::chrono::year_month_day(d) + std::chrono::years(years);
    if (shifted.ok()) return Date(shifted);
    // Feb 29 -> Mar 1
    return Date(shifted.year() / shifted.month() / std::chrono::last) + std::chrono::days(1);
}

}  // namespace btcecon
