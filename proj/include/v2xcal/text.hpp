#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace v2xcal {

std::string to_lower(std::string_view text);
std::string_view trim(std::string_view text);
std::vector<std::string> split(std::string_view text, char delimiter);

// Shortest decimal that parses back to the same double, always in plain
// fixed notation (no exponent). Used for every numeric field we write, so
// output is lossless and byte-stable.
std::string format_double(double value);

// Strict parsers: the whole (trimmed) string must be consumed.
std::optional<double> parse_double(std::string_view text);
std::optional<std::int64_t> parse_int(std::string_view text);
std::optional<std::uint64_t> parse_uint(std::string_view text);

}  // namespace v2xcal
