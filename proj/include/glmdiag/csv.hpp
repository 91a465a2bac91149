#pragma once

#include <charconv>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace glmdiag {

// A CSV parse failure, carrying the 1-based line number.
class CsvError : public std::runtime_error {
 public:
  CsvError(std::string msg, std::size_t line_) : std::runtime_error(std::move(msg)), line(line_) {}
  std::size_t line;
};

// Numeric table with a mandatory header row.  Comma separated, '.' decimal
// point, UTF-8; no quoting (the inputs are plain numeric exports).
struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;  // row-major

  int column_index(const std::string& name) const {
    for (std::size_t j = 0; j < columns.size(); ++j) {
      if (columns[j] == name) return static_cast<int>(j);
    }
    return -1;
  }

  std::vector<double> column(const std::string& name) const {
    const int j = column_index(name);
    if (j < 0) throw CsvError("column '" + name + "' not found in CSV header", 1);
    std::vector<double> out(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) out[i] = rows[i][static_cast<std::size_t>(j)];
    return out;
  }
};

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  for (std::string& s : out) {
    const auto b = s.find_first_not_of(" \t");
    const auto e = s.find_last_not_of(" \t");
    s = b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  }
  return out;
}

}  // namespace detail

inline CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw CsvError("cannot open CSV file: " + path.string(), 0);

  CsvTable table;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const auto cells = detail::split_csv_line(line);
    if (table.columns.empty()) {
      table.columns = cells;
      if (table.columns.empty() || table.columns[0].empty()) {
        throw CsvError("missing CSV header row", lineno);
      }
      continue;
    }
    if (cells.size() != table.columns.size()) {
      throw CsvError("expected " + std::to_string(table.columns.size()) + " fields but found " +
                         std::to_string(cells.size()),
                     lineno);
    }
    std::vector<double> row(cells.size());
    for (std::size_t j = 0; j < cells.size(); ++j) {
      const std::string& cell = cells[j];
      double value = 0.0;
      const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
      if (ec != std::errc() || ptr != cell.data() + cell.size()) {
        throw CsvError("cannot parse '" + cell + "' in column '" + table.columns[j] +
                           "' as a number",
                       lineno);
      }
      row[j] = value;
    }
    table.rows.push_back(std::move(row));
  }
  if (table.columns.empty()) throw CsvError("empty CSV file: " + path.string(), 0);
  return table;
}

}  // namespace glmdiag
