// Small helpers for the columnar text formats.
#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "isoswarm/vector3.hpp"

namespace isoswarm {

// Shortest-safe round-trip form: 17 significant digits.
std::string format_double(double v);
// "x,y,z" with 17 significant digits each.
std::string format_vector(const Vector3& v);

std::string_view trim(std::string_view s);
std::vector<std::string_view> split(std::string_view s, char sep);

// Parsers throw ParseError carrying `line`.
double parse_double(std::string_view s, std::size_t line);
std::uint64_t parse_u64(std::string_view s, std::size_t line);
Vector3 parse_vector(std::string_view s, std::size_t line);

}  // namespace isoswarm
