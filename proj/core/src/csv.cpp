#include "flip/csv.hpp"

#include <charconv>
#include <string>

#include "flip/error.hpp"

namespace flip::csv {

std::string format(double value) {
  if (value == 0.0) return "0";  // folds -0 into 0
  char buffer[32];
  auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, result.ptr);
}

std::vector<std::string> split(std::string_view line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    out.emplace_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double parse_double(std::string_view field) {
  while (!field.empty() && (field.back() == '\r' || field.back() == ' ')) field.remove_suffix(1);
  double value = 0.0;
  auto result = std::from_chars(field.data(), field.data() + field.size(), value);
  if (result.ec != std::errc() || result.ptr != field.data() + field.size())
    throw ValidationError("malformed number '" + std::string(field) + "'");
  return value;
}

}  // namespace flip::csv
