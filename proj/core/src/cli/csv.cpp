#include "q2d/cli/csv.hpp"

#include "q2d/error.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>

namespace q2d::cli {

namespace {

std::string quote_if_needed(const std::string &s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos)
    return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"')
      q += '"';
    q += c;
  }
  return q + '"';
}

// Splits one CSV record; `quoted` marks fields that were quoted.
bool read_record(std::istream &in, std::vector<std::string> &fields, std::vector<bool> &quoted) {
  fields.clear();
  quoted.clear();
  if (in.peek() == std::char_traits<char>::eof())
    return false;
  std::string cur;
  bool in_quotes = false, was_quoted = false;
  for (int ch; (ch = in.get()) != std::char_traits<char>::eof();) {
    const char c = static_cast<char>(ch);
    if (in_quotes) {
      if (c == '"') {
        if (in.peek() == '"') {
          cur += '"';
          in.get();
        } else {
          in_quotes = false;
        }
      } else {
        cur += c;
      }
      continue;
    }
    if (c == '"' && cur.empty()) {
      in_quotes = was_quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      quoted.push_back(was_quoted);
      cur.clear();
      was_quoted = false;
    } else if (c == '\n') {
      break;
    } else if (c != '\r') {
      cur += c;
    }
  }
  fields.push_back(std::move(cur));
  quoted.push_back(was_quoted);
  return true;
}

Cell parse_cell(const std::string &s, bool quoted) {
  if (quoted)
    return s;
  if (s == "NA")
    return std::monostate{};
  if (s == "true")
    return true;
  if (s == "false")
    return false;
  const char *b = s.data(), *e = s.data() + s.size();
  if (!s.empty() && s.find_first_not_of("-0123456789") == std::string::npos) {
    std::int64_t v = 0;
    const auto [p, ec] = std::from_chars(b, e, v);
    if (ec == std::errc() && p == e)
      return v;
  }
  double d = 0.0;
  const auto [p, ec] = std::from_chars(b, e, d);
  if (!s.empty() && ec == std::errc() && p == e)
    return d;
  return s;
}

} // namespace

std::string format_cell(const Cell &cell) {
  struct Visitor {
    std::string operator()(std::monostate) const { return "NA"; }
    std::string operator()(double d) const {
      std::array<char, 64> buf{};
      const auto [p, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), d);
      std::string s(buf.data(), p);
      if (std::isfinite(d) && s.find_first_of(".e") == std::string::npos)
        s += ".0";
      return s;
    }
    std::string operator()(std::int64_t v) const { return std::to_string(v); }
    std::string operator()(bool b) const { return b ? "true" : "false"; }
    std::string operator()(const std::string &s) const {
      // Text that would read back as another type is quoted.
      if (s.empty() || !std::holds_alternative<std::string>(parse_cell(s, false)))
        return "\"" + s + "\"";
      return quote_if_needed(s);
    }
  };
  return std::visit(Visitor{}, cell);
}

void emit_csv(const Table &table, std::ostream &out) {
  for (std::size_t i = 0; i < table.header.size(); ++i)
    out << (i ? "," : "") << quote_if_needed(table.header[i]);
  out << '\n';
  for (const auto &row : table.rows) {
    if (row.size() != table.header.size())
      throw InvalidInput("emit_csv: row width does not match the header");
    for (std::size_t i = 0; i < row.size(); ++i)
      out << (i ? "," : "") << format_cell(row[i]);
    out << '\n';
  }
}

void emit_csv(const Table &table, const std::filesystem::path &path) {
  std::ofstream f(path);
  if (!f)
    throw IoError("cannot open '" + path.string() + "' for writing");
  emit_csv(table, f);
  f.flush();
  if (!f)
    throw IoError("write to '" + path.string() + "' failed");
}

Table read_csv(std::istream &in) {
  Table t;
  std::vector<std::string> fields;
  std::vector<bool> quoted;
  if (!read_record(in, fields, quoted))
    throw InvalidInput("read_csv: missing header");
  t.header = fields;
  while (read_record(in, fields, quoted)) {
    if (fields.size() == 1 && fields[0].empty() && !quoted[0])
      continue;
    if (fields.size() != t.header.size())
      throw InvalidInput("read_csv: row " + std::to_string(t.rows.size() + 1) + " has " +
                         std::to_string(fields.size()) + " fields, header has " +
                         std::to_string(t.header.size()));
    std::vector<Cell> row;
    row.reserve(fields.size());
    for (std::size_t i = 0; i < fields.size(); ++i)
      row.push_back(parse_cell(fields[i], quoted[i]));
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table read_csv(const std::filesystem::path &path) {
  std::ifstream f(path);
  if (!f)
    throw IoError("cannot open '" + path.string() + "' for reading");
  return read_csv(f);
}

void set_log_column(std::vector<Row> &rows, const std::string &name, const std::vector<double> &ln_values,
                    const std::vector<double> &prefactor) {
  if (ln_values.size() != rows.size() || (!prefactor.empty() && prefactor.size() != rows.size()))
    throw InvalidInput("set_log_column: one value per row expected");
  std::vector<double> linear(rows.size());
  bool keep = true;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    linear[i] = (prefactor.empty() ? 1.0 : prefactor[i]) * std::exp(ln_values[i]);
    keep = keep && std::isnormal(linear[i]);
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (keep)
      rows[i].set(name, linear[i]);
    rows[i].set(name + "_ln", ln_values[i]);
  }
}

} // namespace q2d::cli
