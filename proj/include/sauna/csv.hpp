#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace sauna::csv {

// Shortest representation that round-trips exactly (std::to_chars).
// NaN maps to the empty field.
std::string format_double(double value);
// Empty fields map back to NaN.
double parse_double(const std::string& field);

std::string escape_field(const std::string& field);

// RFC-4180 row: comma separated, CRLF terminated.
void write_row(std::ostream& out, const std::vector<std::string>& fields);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  // Column index by name; -1 if absent.
  int column(const std::string& name) const;
  double number(std::size_t row, int col) const;
};

Table read_file(const std::string& path);
void write_file(const std::string& path, const Table& table);

}  // namespace sauna::csv
