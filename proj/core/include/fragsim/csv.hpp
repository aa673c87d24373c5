#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace fragsim {

inline constexpr int kSchemaVersion = 1;

/// Shortest decimal string that parses back to the same double.
std::string format_double(double value);

/// Numeric table. Every file written from it starts with a schema_version
/// column ahead of `columns`.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  /// Index of `name` in columns; throws std::out_of_range if absent.
  std::size_t column(std::string_view name) const;
};

std::string format_csv(const Table& table);
void write_csv(const std::filesystem::path& path, const Table& table);
void write_text(const std::filesystem::path& path, const std::string& text);

/// Reads a file produced by write_csv. Throws std::runtime_error on I/O
/// failure, a malformed cell or an unsupported schema version.
Table read_csv(const std::filesystem::path& path);

}  // namespace fragsim
