#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace avix::io {

// Empty cells (monostate) render as an empty field.
using Cell = std::variant<std::monostate, std::int64_t, double, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  explicit Table(std::vector<std::string> cols = {}) : columns(std::move(cols)) {}

  // Throws kParameter when the row width differs from the header.
  void add_row(std::vector<Cell> row);
};

/// Six significant digits with trailing zeros kept ("4.08000"); non-finite
/// values render empty.
std::string format_double(double value);
std::string format_cell(const Cell& cell);

/// UTF-8 CSV with a header row and RFC-4180 quoting.
std::string to_csv(const Table& table);
void write_table(const Table& table, const std::filesystem::path& path);

/// Reads a CSV written by write_table; every cell comes back as a string.
struct TextTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  std::size_t column_index(std::string_view name) const;  // throws kParse if absent
};
TextTable parse_csv(std::string_view text, std::string_view name);
TextTable read_table(const std::filesystem::path& path);

}  // namespace avix::io
