#include "decouple/csv.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <locale>
#include <sstream>

#include "decouple/errors.hpp"

namespace decouple {

namespace {

std::string quote(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

// RFC-4180 split of one physical line (no embedded newlines in our files).
std::vector<std::string> split_record(const std::string& line, std::size_t line_no) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (quoted) throw FormatError("unterminated quote on line " + std::to_string(line_no));
  fields.push_back(std::move(cur));
  return fields;
}

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  const auto e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

}  // namespace

void CsvTable::add_row(std::vector<double> row) {
  if (row.size() != columns.size()) {
    throw FormatError("row has " + std::to_string(row.size()) + " values, expected " + std::to_string(columns.size()));
  }
  rows.push_back(std::move(row));
}

std::size_t CsvTable::column_index(std::string_view name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == name) return i;
  }
  throw FormatError("no column named '" + std::string(name) + "'");
}

std::vector<double> CsvTable::column(std::string_view name) const {
  const std::size_t c = column_index(name);
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r[c]);
  return out;
}

std::string CsvTable::meta(std::string_view key) const {
  for (const auto& [k, v] : metadata) {
    if (k == key) return v;
  }
  return {};
}

std::string format_number(double value) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << std::setprecision(12) << value;
  return os.str();
}

void write_csv(std::ostream& os, const CsvTable& table) {
  for (const auto& [k, v] : table.metadata) os << "# " << k << ": " << v << "\r\n";
  for (std::size_t i = 0; i < table.columns.size(); ++i) os << (i ? "," : "") << quote(table.columns[i]);
  os << "\r\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_number(row[i]);
    os << "\r\n";
  }
}

void write_csv(const std::filesystem::path& path, const CsvTable& table) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open " + path.string() + " for writing");
  write_csv(os, table);
}

CsvTable read_csv(std::istream& is) {
  CsvTable table;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!have_header && !line.empty() && line[0] == '#') {
      const std::string body = trim(line.substr(1));
      const auto colon = body.find(':');
      if (colon == std::string::npos) {
        table.add_metadata(body, "");
      } else {
        table.add_metadata(trim(body.substr(0, colon)), trim(body.substr(colon + 1)));
      }
      continue;
    }
    if (trim(line).empty()) continue;
    auto fields = split_record(line, line_no);
    if (!have_header) {
      for (auto& f : fields) table.columns.push_back(trim(f));
      have_header = true;
      continue;
    }
    if (fields.size() != table.columns.size()) {
      throw FormatError("line " + std::to_string(line_no) + ": expected " + std::to_string(table.columns.size()) +
                        " fields, found " + std::to_string(fields.size()));
    }
    std::vector<double> row;
    row.reserve(fields.size());
    for (const auto& raw : fields) {
      const std::string f = trim(raw);
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
      if (ec != std::errc() || ptr != f.data() + f.size() || f.empty()) {
        throw FormatError("line " + std::to_string(line_no) + ": non-numeric value '" + f + "'");
      }
      row.push_back(v);
    }
    table.rows.push_back(std::move(row));
  }
  if (!have_header) throw FormatError("CSV has no header row");
  if (table.rows.empty()) throw FormatError("CSV has no data rows");
  return table;
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw FormatError("cannot open " + path.string());
  return read_csv(is);
}

}  // namespace decouple
