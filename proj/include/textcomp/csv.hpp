#pragma once

#include <string>
#include <vector>

namespace textcomp {

// Minimal RFC-4180-ish CSV: `,` delimiter, `"` quoting.
std::string csv_escape(const std::string& field);
std::string csv_join(const std::vector<std::string>& fields);
std::vector<std::string> csv_split(const std::string& line);

// Shortest decimal form that parses back to the same double.
std::string format_double_exact(double value);
// value with `digits` significant digits.
std::string format_double(double value, int digits);

}  // namespace textcomp
