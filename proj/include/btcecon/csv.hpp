#pragma once

// Minimal CSV helpers for the comma / dot-decimal / header-first dialect.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace btcecon::csv {

/// Splits one line on commas; strips surrounding whitespace and a single
/// pair of double quotes from each field.
[[nodiscard]] std::vector<std::string> split_line(std::string_view line);

/// Strict decimal parse of the whole field (no locale, no thousands
/// separators). Empty optional on failure.
[[nodiscard]] std::optional<double> parse_number(std::string_view field);

/// Shortest representation that round-trips to the same double.
[[nodiscard]] std::string format_number(double v);

}  // namespace btcecon::csv
