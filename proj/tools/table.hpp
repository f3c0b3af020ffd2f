#pragma once

#include <ostream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace qwell::cli {

/// Empty cells are written as an empty CSV field and as JSON null.
using Cell = std::variant<std::monostate, long, double, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row) { rows.push_back(std::move(row)); }
};

/// Ordered "key = value" pairs describing the resolved run configuration.
/// An empty key marks a free-text note.
using Metadata = std::vector<std::pair<std::string, std::string>>;

enum class Format { Csv, Json };

/// Shortest representation that reads back to the same double.
std::string format_number(double value);

/// "# key = value" lines, then the header row and the data rows.
void write_csv(std::ostream& os, const Metadata& meta, const Table& table);

/// {"config": {...}, "rows": [{column: value, ...}, ...]}
void write_json(std::ostream& os, const Metadata& meta, const Table& table);

void write_table(std::ostream& os, Format format, const Metadata& meta, const Table& table);

}  // namespace qwell::cli
