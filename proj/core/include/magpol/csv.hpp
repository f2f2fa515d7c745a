#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace magpol::csv {

/// A numeric table with named columns, as read from a headed CSV file.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

/// Reads a comma-separated numeric table whose header must equal `expected_header`.
/// Throws ConfigError with 1-based row and column on any malformed cell, an empty
/// file, a header mismatch, or a row with the wrong field count.
[[nodiscard]] Table read(std::istream& in, std::span<const std::string_view> expected_header);
[[nodiscard]] Table read_file(const std::filesystem::path& path,
                              std::span<const std::string_view> expected_header);

/// Formats with 12 significant digits ("nan" for NaN).
[[nodiscard]] std::string number(double value);

void write_header(std::ostream& out, std::span<const std::string_view> columns);
void write_row(std::ostream& out, std::span<const double> values);

}  // namespace magpol::csv
