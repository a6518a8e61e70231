#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace resperf {

std::string_view trim(std::string_view s);
std::vector<std::string_view> split_lines(std::string_view text);
std::vector<std::string_view> split(std::string_view s, char sep);

/// Shortest decimal text that parses back to exactly `v`.
std::string format_double(double v);
/// Whole string must be a finite number.
std::optional<double> parse_double(std::string_view s);
std::optional<long long> parse_int(std::string_view s);

/// FNV-1a 64 of a byte string, as 16 hex digits.
std::string fnv1a_hex(std::string_view bytes);
std::string read_file(const std::string& path);

}  // namespace resperf
