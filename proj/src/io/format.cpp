#include "gambles/io/format.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <json.hpp>
#include <stdexcept>

#include "gambles/errors.hpp"

namespace gambles::io {

std::string format_number(double value) {
  if (std::isnan(value)) return "indeterminate";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buffer[64];
  const auto [end, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
  if (ec != std::errc{}) throw std::runtime_error("number formatting failed");
  return std::string(buffer, end);
}

std::string format_number(ExtendedReal value) { return format_number(value.to_double()); }

OutputFormat parse_format(std::string_view name) {
  if (name == "csv") return OutputFormat::csv;
  if (name == "jsonl") return OutputFormat::jsonl;
  if (name == "table") return OutputFormat::table;
  throw ValidationError("unknown output format '" + std::string(name) + "'");
}

std::string_view file_extension(OutputFormat format) {
  switch (format) {
    case OutputFormat::csv:
      return "csv";
    case OutputFormat::jsonl:
      return "jsonl";
    case OutputFormat::table:
      return "txt";
  }
  return "txt";
}

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns_.size()) throw std::logic_error("table row width does not match header");
  rows_.push_back(std::move(row));
}

namespace {

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string quoted = "\"";
  for (char c : text) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + "\"";
}

bool is_json_number(const Cell& cell) {
  return cell.numeric && cell.text != "inf" && cell.text != "-inf" && cell.text != "indeterminate";
}

}  // namespace

std::string Table::render(OutputFormat format) const {
  std::string out;
  switch (format) {
    case OutputFormat::csv: {
      for (std::size_t c = 0; c < columns_.size(); ++c) out += (c ? "," : "") + csv_field(columns_[c]);
      out += '\n';
      for (const auto& row : rows_) {
        for (std::size_t c = 0; c < row.size(); ++c) out += (c ? "," : "") + csv_field(row[c].text);
        out += '\n';
      }
      break;
    }
    case OutputFormat::jsonl: {
      for (const auto& row : rows_) {
        out += '{';
        for (std::size_t c = 0; c < row.size(); ++c) {
          if (c) out += ',';
          out += nlohmann::json(columns_[c]).dump() + ':';
          out += is_json_number(row[c]) ? row[c].text : nlohmann::json(row[c].text).dump();
        }
        out += "}\n";
      }
      break;
    }
    case OutputFormat::table: {
      std::vector<std::size_t> width(columns_.size());
      for (std::size_t c = 0; c < columns_.size(); ++c) width[c] = columns_[c].size();
      for (const auto& row : rows_) {
        for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].text.size());
      }
      const auto emit = [&](std::size_t c, const std::string& text, bool right) {
        const std::string pad(width[c] - text.size(), ' ');
        out += (c ? "  " : "") + (right ? pad + text : text + pad);
      };
      for (std::size_t c = 0; c < columns_.size(); ++c) emit(c, columns_[c], false);
      out += '\n';
      for (const auto& row : rows_) {
        for (std::size_t c = 0; c < row.size(); ++c) emit(c, row[c].text, row[c].numeric);
        out += '\n';
      }
      break;
    }
  }
  return out;
}

std::string fnv1a64_hex(std::string_view bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  char buffer[17];
  std::snprintf(buffer, sizeof buffer, "%016llx", static_cast<unsigned long long>(hash));
  return buffer;
}

}  // namespace gambles::io
