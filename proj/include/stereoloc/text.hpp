#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace stereoloc::text {

/// Fixed-point text with at least `min_decimals` fractional digits, extended
/// until the value parses back bit-exactly.
std::string fixed_exact(double value, int min_decimals = 6);

/// General-format text keeping at least `min_significant` digits (trailing
/// zeros preserved), extended until the value parses back bit-exactly.
std::string general_exact(double value, int min_significant = 6);

std::optional<double> parse_double(std::string_view s);
std::optional<long long> parse_int(std::string_view s);

/// Splits on runs of spaces/tabs.
std::vector<std::string_view> split_ws(std::string_view line);
std::vector<std::string_view> split(std::string_view line, char sep);

/// Splits into lines, accepting LF or CRLF.
std::vector<std::string_view> lines(std::string_view text);

std::string_view trim(std::string_view s);

}  // namespace stereoloc::text
