#include "bfbelp/csv.hpp"

#include <charconv>
#include <cmath>

#include "bfbelp/types.hpp"

namespace bfbelp::csv {

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string fmt(std::int64_t v) { return std::to_string(v); }
std::string fmt(std::uint64_t v) { return std::to_string(v); }

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

double to_double(std::string_view s, const std::string& context) {
  if (s == "nan") return std::nan("");
  if (s == "inf") return INFINITY;
  if (s == "-inf") return -INFINITY;
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size() || s.empty()) {
    throw InputError(context + ": bad number '" + std::string(s) + "'");
  }
  return v;
}

std::int64_t to_int(std::string_view s, const std::string& context) {
  std::int64_t v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size() || s.empty()) {
    throw InputError(context + ": bad integer '" + std::string(s) + "'");
  }
  return v;
}

std::uint64_t to_uint(std::string_view s, const std::string& context) {
  std::uint64_t v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size() || s.empty()) {
    throw InputError(context + ": bad unsigned integer '" + std::string(s) + "'");
  }
  return v;
}

std::string join_ids(const std::vector<int>& ids) {
  std::string out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) out += ';';
    out += std::to_string(ids[i]);
  }
  return out;
}

std::vector<int> parse_ids(std::string_view s, const std::string& context) {
  std::vector<int> out;
  if (s.empty()) return out;
  for (auto part : split(s, ';')) out.push_back(static_cast<int>(to_int(part, context)));
  return out;
}

}  // namespace bfbelp::csv
