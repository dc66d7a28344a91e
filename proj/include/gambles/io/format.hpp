#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "gambles/extended_real.hpp"

namespace gambles::io {

/// Shortest decimal text that parses back to the same double. Infinities
/// render as "inf" / "-inf", NaN as "indeterminate".
std::string format_number(double value);
std::string format_number(ExtendedReal value);

enum class OutputFormat { csv, jsonl, table };

OutputFormat parse_format(std::string_view name);

struct Cell {
  std::string text;
  bool numeric = false;

  static Cell number(double value) { return {format_number(value), true}; }
  static Cell number(ExtendedReal value) { return {format_number(value), true}; }
  static Cell integer(std::int64_t value) { return {std::to_string(value), true}; }
  static Cell flag(bool value) { return {value ? "true" : "false", false}; }
  static Cell label(std::string value) { return {std::move(value), false}; }
};

/// Rows of cells under named columns, rendered as CSV with a header row,
/// JSON lines (one object per row; non-finite numbers become strings) or a
/// space-aligned text table.
class Table {
 public:
  explicit Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

  void add_row(std::vector<Cell> row);
  const std::vector<std::string>& columns() const noexcept { return columns_; }
  const std::vector<std::vector<Cell>>& rows() const noexcept { return rows_; }

  std::string render(OutputFormat format) const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<Cell>> rows_;
};

std::string_view file_extension(OutputFormat format);

/// FNV-1a 64-bit digest, as 16 lowercase hex digits.
std::string fnv1a64_hex(std::string_view bytes);

}  // namespace gambles::io
