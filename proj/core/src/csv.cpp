#include "magpol/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include <fmt/format.h>

#include "magpol/errors.hpp"

namespace magpol::csv {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  while (true) {
    const auto comma = line.find(',', pos);
    fields.push_back(trim(line.substr(pos, comma - pos)));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return fields;
}

}  // namespace

Table read(std::istream& in, std::span<const std::string_view> expected_header) {
  Table table;
  std::string raw;
  std::size_t row_no = 0;
  bool have_header = false;
  while (std::getline(in, raw)) {
    ++row_no;
    std::string_view line = raw;
    if (row_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.remove_prefix(3);
    if (trim(line).empty()) continue;
    const auto fields = split(line);
    if (!have_header) {
      bool match = fields.size() == expected_header.size();
      for (std::size_t i = 0; match && i < fields.size(); ++i) match = fields[i] == expected_header[i];
      if (!match) {
        throw ConfigError(fmt::format("row {}: header '{}' does not match expected '{}'", row_no,
                                      trim(line), fmt::join(expected_header, ",")));
      }
      table.header.assign(fields.begin(), fields.end());
      have_header = true;
      continue;
    }
    if (fields.size() != expected_header.size()) {
      throw ConfigError(fmt::format("row {}: expected {} columns, found {}", row_no,
                                    expected_header.size(), fields.size()));
    }
    std::vector<double> values(fields.size());
    for (std::size_t col = 0; col < fields.size(); ++col) {
      const auto f = fields[col];
      const auto* end = f.data() + f.size();
      auto [ptr, ec] = std::from_chars(f.data(), end, values[col]);
      if (f.empty() || ec != std::errc{} || ptr != end || !std::isfinite(values[col])) {
        throw ConfigError(fmt::format("row {}, column {} ({}): '{}' is not a finite number", row_no,
                                      col + 1, expected_header[col], f));
      }
    }
    table.rows.push_back(std::move(values));
  }
  if (!have_header) throw ConfigError("CSV input is empty");
  if (table.rows.empty()) throw ConfigError("CSV input has a header but no data rows");
  return table;
}

Table read_file(const std::filesystem::path& path, std::span<const std::string_view> expected_header) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open '{}'", path.string()));
  try {
    return read(in, expected_header);
  } catch (const ConfigError& e) {
    throw ConfigError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

std::string number(double value) {
  if (std::isnan(value)) return "nan";
  return fmt::format("{:.12g}", value);
}

void write_header(std::ostream& out, std::span<const std::string_view> columns) {
  out << fmt::format("{}\n", fmt::join(columns, ","));
}

void write_row(std::ostream& out, std::span<const double> values) {
  std::string line;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) line += ',';
    line += number(values[i]);
  }
  line += '\n';
  out << line;
}

}  // namespace magpol::csv
