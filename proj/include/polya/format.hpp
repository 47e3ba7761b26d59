#pragma once

#include <span>
#include <string>
#include <string_view>

namespace polya {

// Shortest decimal representation that parses back to the same double.
std::string format_double(double value);

// Strict parse of a complete token; throws DataError on trailing garbage.
double parse_double(std::string_view token);
long long parse_int(std::string_view token);

std::string join_doubles(std::span<const double> values, std::string_view sep);

}  // namespace polya
