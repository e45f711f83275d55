#pragma once

#include "q2d/error.hpp"
#include "q2d/potential.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace q2d::cli {

enum class ValueKind {
  positive,         ///< finite, > 0
  nonnegative,      ///< finite, >= 0
  real,             ///< finite
  integer,          ///< >= 0
  flag,             ///< true / false
  text,             ///< one of `choices` when they are given
  text_list,        ///< comma-separated, each one of `choices`
  potential,        ///< name[:p1[:p2]] or tabulated:path
  potential_list,   ///< comma-separated potentials
  positive_list,    ///< comma-separated numbers or geometric:first:last:count
  nonnegative_list, ///< as positive_list, zero allowed
  real_list,        ///< as positive_list, any finite value
};

struct KeySpec {
  std::string key;
  ValueKind kind;
  std::string help;
  std::optional<std::string> default_value; ///< nullopt: optional with no default
  bool required = false;
  std::vector<std::string> choices;
};

struct CommandSpec {
  std::string name;
  std::string summary;
  std::vector<KeySpec> keys;
  /// Groups of keys of which at most one may be set.
  std::vector<std::vector<std::string>> exclusive;
  /// Groups of keys of which exactly one must be set (implies exclusive).
  std::vector<std::vector<std::string>> one_of;
};

/// Every subcommand with its keys, in the order shown by --help.
const std::vector<CommandSpec> &command_specs();
const CommandSpec *find_command(std::string_view name);

/// Every violation found while parsing, each naming its key.
class ConfigError : public InvalidInput {
public:
  explicit ConfigError(std::vector<std::string> violations);
  const std::vector<std::string> &violations() const noexcept { return violations_; }

private:
  std::vector<std::string> violations_;
};

/// Validated key-value configuration of one subcommand, defaults filled in.
struct RunConfig {
  std::string command;
  std::map<std::string, std::string> values;
  std::set<std::string> given; ///< keys set explicitly (file or flags)
  std::filesystem::path base_dir; ///< relative tabulated paths resolve here

  bool has(const std::string &key) const { return values.count(key) > 0; }
  const std::string &text(const std::string &key) const;
  double number(const std::string &key) const;
  std::optional<double> optional_number(const std::string &key) const;
  std::int64_t integer(const std::string &key) const;
  bool flag(const std::string &key) const;
  std::vector<double> list(const std::string &key) const;
  std::vector<std::string> text_list(const std::string &key) const;
  Potential potential(const std::string &key) const;
  std::vector<Potential> potentials(const std::string &key) const;
  /// "-" or empty: standard output.
  std::string output() const { return has("output") ? text("output") : "-"; }
};

/// Parses `text` (lines of key = value, '#' comments) and then `args`
/// (an optional leading subcommand, then --key value or --key=value; a flag key
/// may omit its value). Flags override the file. The subcommand comes from the
/// `command` key or the leading argument; when both are present they must agree.
/// Throws ConfigError listing every violation.
RunConfig parse_config(std::string_view text, const std::vector<std::string> &args = {},
                       const std::filesystem::path &base_dir = {});

/// Reads `path` and parses it as parse_config does; relative tabulated paths
/// resolve against its directory.
RunConfig load_config(const std::filesystem::path &path, const std::vector<std::string> &args = {});

/// name[:p1[:p2]]: harmonic, quartic, power:p, box[:side], zero,
/// square-barrier:height:range, hard-core:radius, harmonic-bump:amp:width,
/// disc|parabolic|cone|shell:lambda:R (soft 2D profiles), tabulated:path.
Potential parse_potential(std::string_view spec, const std::filesystem::path &base_dir = {});

/// Comma-separated numbers, or geometric:first:last:count.
std::vector<double> parse_list(std::string_view text);

} // namespace q2d::cli
