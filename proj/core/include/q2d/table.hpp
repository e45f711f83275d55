#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace q2d {

/// One CSV field. monostate is written as "NA".
using Cell = std::variant<std::monostate, double, std::int64_t, bool, std::string>;

/// A row of named cells in insertion order.
struct Row {
  std::vector<std::string> names;
  std::vector<Cell> cells;

  void set(const std::string &name, Cell value);
  const Cell *find(const std::string &name) const;
  /// Numeric value of a double or integer cell; nullopt otherwise.
  std::optional<double> number(const std::string &name) const;
};

/// Homogeneous rows under a fixed header.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<Cell>> rows;
};

/// Orders each row's cells by `header`; throws InvalidInput when a row lacks
/// a column or carries an extra one.
Table make_table(const std::vector<std::string> &header, const std::vector<Row> &rows);

} // namespace q2d
