#include "q2d/table.hpp"

#include "q2d/error.hpp"

#include <algorithm>

namespace q2d {

void Row::set(const std::string &name, Cell value) {
  const auto it = std::find(names.begin(), names.end(), name);
  if (it != names.end()) {
    cells[static_cast<std::size_t>(it - names.begin())] = std::move(value);
    return;
  }
  names.push_back(name);
  cells.push_back(std::move(value));
}

const Cell *Row::find(const std::string &name) const {
  const auto it = std::find(names.begin(), names.end(), name);
  return it == names.end() ? nullptr : &cells[static_cast<std::size_t>(it - names.begin())];
}

std::optional<double> Row::number(const std::string &name) const {
  const Cell *c = find(name);
  if (!c)
    return std::nullopt;
  if (const auto *d = std::get_if<double>(c))
    return *d;
  if (const auto *i = std::get_if<std::int64_t>(c))
    return static_cast<double>(*i);
  return std::nullopt;
}

Table make_table(const std::vector<std::string> &header, const std::vector<Row> &rows) {
  Table t{.header = header};
  t.rows.reserve(rows.size());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const Row &r = rows[k];
    if (r.names.size() != header.size())
      throw InvalidInput("table: row " + std::to_string(k) + " has " + std::to_string(r.names.size()) +
                         " columns, header has " + std::to_string(header.size()));
    std::vector<Cell> out;
    out.reserve(header.size());
    for (const auto &h : header) {
      const Cell *c = r.find(h);
      if (!c)
        throw InvalidInput("table: row " + std::to_string(k) + " lacks column '" + h + "'");
      out.push_back(*c);
    }
    t.rows.push_back(std::move(out));
  }
  return t;
}

} // namespace q2d
