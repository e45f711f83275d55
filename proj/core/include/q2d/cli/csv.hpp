#pragma once

#include "q2d/error.hpp"
#include "q2d/table.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace q2d::cli {

/// Raised for unreadable or unwritable files; the message carries the path.
class IoError : public Error {
public:
  using Error::Error;
};

/// Header line, then one line per row. Doubles use the shortest decimal that
/// reads back to the same value (with ".0" added to integral values so they stay
/// doubles), integers are plain digits, bools are true/false, empty cells NA.
/// Text containing a comma, quote or newline is quoted with doubled quotes.
void emit_csv(const Table &table, std::ostream &out);
void emit_csv(const Table &table, const std::filesystem::path &path);

/// Inverse of emit_csv: the cell types are recovered from their spelling.
Table read_csv(std::istream &in);
Table read_csv(const std::filesystem::path &path);

/// Formats one cell as emit_csv does.
std::string format_cell(const Cell &cell);

/// Adds `<name>_ln` = ln_values[i] to every row, and the linear column
/// `<name>` = prefactor[i] * exp(ln_values[i]) only when that is a normal
/// double in every row (the table stays homogeneous). An empty `prefactor`
/// means 1.
void set_log_column(std::vector<Row> &rows, const std::string &name, const std::vector<double> &ln_values,
                    const std::vector<double> &prefactor = {});

} // namespace q2d::cli
