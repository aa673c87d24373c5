#include "fragsim/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace fragsim {

std::string format_double(double value) {
  char buffer[32];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, result.ptr);
}

std::size_t Table::column(std::string_view name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == name) {
      return i;
    }
  }
  throw std::out_of_range("no column named '" + std::string(name) + "'");
}

std::string format_csv(const Table& table) {
  std::string out = "schema_version";
  for (const auto& name : table.columns) {
    out += ',';
    out += name;
  }
  out += '\n';
  const std::string version = std::to_string(kSchemaVersion);
  for (const auto& row : table.rows) {
    out += version;
    for (const double value : row) {
      out += ',';
      out += format_double(value);
    }
    out += '\n';
  }
  return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot open " + path.string() + " for writing");
  }
  out << text;
  out.flush();
  if (!out) {
    throw std::runtime_error("write failed: " + path.string());
  }
}

void write_csv(const std::filesystem::path& path, const Table& table) {
  write_text(path, format_csv(table));
}

namespace {

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    cells.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) {
      break;
    }
    start = comma + 1;
  }
  return cells;
}

double parse_cell(std::string_view cell, const std::filesystem::path& path, std::size_t line) {
  double value = 0.0;
  const auto* end = cell.data() + cell.size();
  const auto result = std::from_chars(cell.data(), end, value);
  if (result.ec != std::errc() || result.ptr != end) {
    throw std::runtime_error(path.string() + ":" + std::to_string(line) + ": bad number '" +
                             std::string(cell) + "'");
  }
  return value;
}

}  // namespace

Table read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open " + path.string());
  }
  std::string line;
  if (!std::getline(in, line)) {
    throw std::runtime_error(path.string() + ": empty file");
  }
  const auto header = split(line);
  if (header.empty() || header.front() != "schema_version") {
    throw std::runtime_error(path.string() + ": first column must be schema_version");
  }
  Table table;
  for (std::size_t i = 1; i < header.size(); ++i) {
    table.columns.emplace_back(header[i]);
  }
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) {
      continue;
    }
    const auto cells = split(line);
    if (cells.size() != header.size()) {
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                               ": expected " + std::to_string(header.size()) + " cells");
    }
    if (parse_cell(cells[0], path, line_no) != kSchemaVersion) {
      throw std::runtime_error(path.string() + ": unsupported schema_version " +
                               std::string(cells[0]));
    }
    std::vector<double> row;
    row.reserve(cells.size() - 1);
    for (std::size_t i = 1; i < cells.size(); ++i) {
      row.push_back(parse_cell(cells[i], path, line_no));
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace fragsim
