#include "polya/format.hpp"

#include <charconv>
#include <system_error>

#include "polya/error.hpp"

namespace polya {

std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc{}) throw DataError("format_double failed");
  return std::string(buf, ptr);
}

double parse_double(std::string_view token) {
  double v = 0.0;
  const char* begin = token.data();
  const char* end = begin + token.size();
  if (begin != end && *begin == '+') ++begin;
  auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc{} || ptr != end || begin == end) {
    throw DataError("not a number: '" + std::string(token) + "'");
  }
  return v;
}

long long parse_int(std::string_view token) {
  long long v = 0;
  const char* begin = token.data();
  const char* end = begin + token.size();
  if (begin != end && *begin == '+') ++begin;
  auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc{} || ptr != end || begin == end) {
    throw DataError("not an integer: '" + std::string(token) + "'");
  }
  return v;
}

std::string join_doubles(std::span<const double> values, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += sep;
    out += format_double(values[i]);
  }
  return out;
}

}  // namespace polya
