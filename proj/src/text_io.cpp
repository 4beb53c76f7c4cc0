#include "isoswarm/text_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

#include "isoswarm/errors.hpp"

namespace isoswarm {

std::string format_double(double v) {
  char buf[32];
  const int n = std::snprintf(buf, sizeof buf, "%.17g", v);
  return std::string(buf, static_cast<std::size_t>(n));
}

std::string format_vector(const Vector3& v) {
  return format_double(v.x) + "," + format_double(v.y) + "," + format_double(v.z);
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      parts.push_back(s.substr(start));
      return parts;
    }
    parts.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

double parse_double(std::string_view s, std::size_t line) {
  s = trim(s);
  double v = 0.0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc{} || ptr != end || !std::isfinite(v)) {
    throw ParseError("invalid number '" + std::string(s) + "'", line);
  }
  return v;
}

std::uint64_t parse_u64(std::string_view s, std::size_t line) {
  s = trim(s);
  std::uint64_t v = 0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc{} || ptr != end) {
    throw ParseError("invalid unsigned integer '" + std::string(s) + "'", line);
  }
  return v;
}

Vector3 parse_vector(std::string_view s, std::size_t line) {
  const auto parts = split(trim(s), ',');
  if (parts.size() != 3) throw ParseError("expected three comma-separated values", line);
  return {parse_double(parts[0], line), parse_double(parts[1], line), parse_double(parts[2], line)};
}

}  // namespace isoswarm
