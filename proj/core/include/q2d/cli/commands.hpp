#pragma once

#include "q2d/cli/config.hpp"
#include "q2d/table.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace q2d::cli {

enum ExitCode : int {
  exit_ok = 0,
  exit_failure = 1,        ///< an assertion failed, or I/O and other errors
  exit_config = 2,         ///< invalid configuration or input
  exit_nonconvergence = 3, ///< some solver did not converge
};

struct CommandResult {
  std::vector<std::string> columns;
  std::vector<Row> rows;
  bool all_converged = true;
  bool assertions_passed = true;
  std::vector<std::string> notes;

  Table table() const { return make_table(columns, rows); }
  /// 3 when a row did not converge, else 1 when an assertion failed, else 0.
  int exit_code() const;
};

/// Runs the configured subcommand. Sweeps report per-row failures in the
/// table; single computations let InvalidInput and ConvergenceError escape.
CommandResult run_command(const RunConfig &config);

/// Runs, writes the CSV to config.output() ('-' is `out`) and the notes to
/// `log`, and maps every failure to an exit code.
int execute(const RunConfig &config, std::ostream &out, std::ostream &log);

/// Usage text listing every subcommand.
std::string help_text();

/// Keys, kinds and defaults of one subcommand.
std::string command_help(const CommandSpec &spec);

} // namespace q2d::cli
