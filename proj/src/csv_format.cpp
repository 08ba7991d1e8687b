#include "intraday/csv_format.hpp"

#include <cstdio>

namespace intraday {

void append_number(std::string& out, double value) {
  char buf[32];
  const int n = std::snprintf(buf, sizeof buf, "%.12g", value);
  out.append(buf, static_cast<std::size_t>(n));
}

std::string format_number(double value) {
  std::string out;
  append_number(out, value);
  return out;
}

void append_optional(std::string& out, const std::optional<double>& value) {
  if (value) append_number(out, *value);
}

}  // namespace intraday
