#include "sauna/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <stdexcept>

namespace sauna::csv {

std::string format_double(double value) {
  if (std::isnan(value)) return "";
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& field) {
  if (field.empty()) return std::nan("");
  double out = 0.0;
  auto res = std::from_chars(field.data(), field.data() + field.size(), out);
  if (res.ec != std::errc{}) {
    throw std::runtime_error("csv: not a number: '" + field + "'");
  }
  return out;
}

std::string escape_field(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) {
    return field;
  }
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void write_row(std::ostream& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) out << ',';
    out << escape_field(fields[i]);
  }
  out << "\r\n";
}

int Table::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return static_cast<int>(i);
  }
  return -1;
}

double Table::number(std::size_t row, int col) const {
  if (col < 0 || row >= rows.size() ||
      static_cast<std::size_t>(col) >= rows[row].size()) {
    throw std::out_of_range("csv: cell out of range");
  }
  return parse_double(rows[row][static_cast<std::size_t>(col)]);
}

namespace {

std::vector<std::string> parse_line(const std::string& content, std::size_t& pos) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  while (pos < content.size()) {
    char c = content[pos];
    if (quoted) {
      if (c == '"') {
        if (pos + 1 < content.size() && content[pos + 1] == '"') {
          field += '"';
          ++pos;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else if (c == '\r' || c == '\n') {
      if (c == '\r' && pos + 1 < content.size() && content[pos + 1] == '\n') ++pos;
      ++pos;
      fields.push_back(std::move(field));
      return fields;
    } else {
      field += c;
    }
    ++pos;
  }
  fields.push_back(std::move(field));
  return fields;
}

}  // namespace

Table read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open csv file: " + path);
  }
  std::string content((std::istreambuf_iterator<char>(in)),
                      std::istreambuf_iterator<char>());
  Table table;
  std::size_t pos = 0;
  bool first = true;
  while (pos < content.size()) {
    auto fields = parse_line(content, pos);
    if (fields.size() == 1 && fields[0].empty()) continue;  // trailing blank line
    if (first) {
      table.header = std::move(fields);
      first = false;
    } else {
      table.rows.push_back(std::move(fields));
    }
  }
  return table;
}

void write_file(const std::string& path, const Table& table) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot open csv file for writing: " + path);
  }
  write_row(out, table.header);
  for (const auto& row : table.rows) {
    write_row(out, row);
  }
}

}  // namespace sauna::csv
