#pragma once

// Minimal CSV helpers with locale-independent, round-trip number text.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace bfbelp::csv {

/// Shortest text that parses back to the same double.
std::string fmt(double v);
std::string fmt(std::int64_t v);
std::string fmt(std::uint64_t v);

std::vector<std::string_view> split(std::string_view line, char sep = ',');

/// Throw InputError(context) on malformed text.
double to_double(std::string_view s, const std::string& context);
std::int64_t to_int(std::string_view s, const std::string& context);
std::uint64_t to_uint(std::string_view s, const std::string& context);

/// Ids joined with ';' and parsed back.
std::string join_ids(const std::vector<int>& ids);
std::vector<int> parse_ids(std::string_view s, const std::string& context);

}  // namespace bfbelp::csv
