#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace lipread {

// Minimal CSV support for the pipeline's tabular artifacts. Fields are
// comma-separated; a field may be wrapped in double quotes when it contains
// commas (the report's candidate-set column). No embedded newlines.
std::vector<std::string> split_csv_line(std::string_view line);

// Shortest round-trip decimal representation of a double ("%.17g" trimmed),
// so rereading a written CSV reproduces the exact bit pattern.
std::string format_double(double value);

// Fixed-point with the given number of decimals, for report rendering.
std::string format_fixed(double value, int decimals);

std::string csv_quote(std::string_view field);

// Reads a whole stream into trimmed lines, dropping a UTF-8 BOM if present.
std::vector<std::string> read_lines(std::istream& in);

std::string trim(std::string_view s);

}  // namespace lipread
