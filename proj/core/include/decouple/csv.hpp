#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace decouple {

/// Numeric table with a metadata header block. On disk every metadata entry
/// is a leading "# key: value" line, followed by an RFC-4180 header row and
/// data rows ('.' decimal separator, 12 significant digits).
struct CsvTable {
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  void add_metadata(std::string key, std::string value) { metadata.emplace_back(std::move(key), std::move(value)); }
  /// Throws FormatError when the row width does not match the columns.
  void add_row(std::vector<double> row);
  /// Throws FormatError for unknown names.
  std::size_t column_index(std::string_view name) const;
  std::vector<double> column(std::string_view name) const;
  /// Value of a metadata key, or empty.
  std::string meta(std::string_view key) const;
};

/// %.12g in the classic locale.
std::string format_number(double value);

void write_csv(std::ostream& os, const CsvTable& table);
void write_csv(const std::filesystem::path& path, const CsvTable& table);

/// Throws FormatError for empty input, ragged rows or non-numeric cells.
CsvTable read_csv(std::istream& is);
CsvTable read_csv(const std::filesystem::path& path);

}  // namespace decouple
