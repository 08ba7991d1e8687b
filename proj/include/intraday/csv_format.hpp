#pragma once

#include <optional>
#include <string>

namespace intraday {

/// Numeric CSV cells: 12 significant digits, `%g` style.
void append_number(std::string& out, double value);
std::string format_number(double value);
/// Empty cell for a missing value.
void append_optional(std::string& out, const std::optional<double>& value);

}  // namespace intraday
