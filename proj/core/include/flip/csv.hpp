#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace flip::csv {

// Shortest decimal representation that round-trips to the same double.
std::string format(double value);

std::vector<std::string> split(std::string_view line, char sep = ',');

// Parses a full-line decimal number; throws ValidationError otherwise.
double parse_double(std::string_view field);

}  // namespace flip::csv
