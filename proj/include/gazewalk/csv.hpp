#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gazewalk::csv {

// Minimal CSV handling for the toolkit's own table formats: comma separated,
// no embedded commas or quotes, empty string means missing.
std::vector<std::string> split_line(std::string_view line);

std::string join(const std::vector<std::string>& fields);

// Formats a double with enough digits to round-trip exactly.
std::string format_double(double v);

std::optional<double> parse_double(std::string_view s);
std::optional<long> parse_int(std::string_view s);

}  // namespace gazewalk::csv
