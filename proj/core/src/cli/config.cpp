#include "q2d/cli/config.hpp"

#include "q2d/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace q2d::cli {

namespace {

using K = ValueKind;

KeySpec opt(std::string key, K kind, std::string help, std::optional<std::string> def = std::nullopt,
            std::vector<std::string> choices = {}) {
  return {std::move(key), kind, std::move(help), std::move(def), false, std::move(choices)};
}

KeySpec req(std::string key, K kind, std::string help) {
  return {std::move(key), kind, std::move(help), std::nullopt, true, {}};
}

std::vector<KeySpec> with_common(std::vector<KeySpec> keys, bool threads = false) {
  keys.push_back(opt("output", K::text, "CSV path, '-' for standard output", "-"));
  if (threads)
    keys.push_back(opt("threads", K::integer, "worker threads, 0 for hardware concurrency", "0"));
  return keys;
}

std::vector<CommandSpec> build_specs() {
  std::vector<CommandSpec> s;
  s.push_back({"transverse", "ground state of -d^2/dz^2 + V(z) and its moments",
               with_common({opt("potential", K::potential, "transverse potential", "harmonic"),
                            opt("points", K::integer, "grid points", "8001"),
                            opt("h", K::positive, "report the mode scaled to thickness h", "1")}),
               {}, {}});
  s.push_back({"scatter3d", "3D zero-energy scattering length and profile bounds",
               with_common({opt("potential", K::potential_list, "interaction potentials", "square-barrier:8:1"),
                            opt("a_scale", K::positive, "scattering family scale a", "1"),
                            opt("points_per_range", K::integer, "grid points inside the range", "4000"),
                            opt("slack", K::nonnegative, "tolerance of the profile bounds", "1e-6")}),
               {}, {}});
  s.push_back({"a2d", "effective 2D potential normalization and a_2D",
               with_common({opt("potential", K::potential_list, "3D interactions; rows zip with h and R"),
                            opt("a", K::positive_list, "3D scattering lengths; rows zip with h"),
                            req("h", K::positive_list, "confinement lengths"),
                            opt("R", K::positive_list, "hard-wall radii of the 3D profile"),
                            opt("transverse", K::potential, "transverse potential", "harmonic"),
                            opt("rel_tol", K::positive, "quadrature tolerance", "1e-9")}),
               {}, {{"potential", "a"}}});
  s.push_back({"scatter2d", "eta(lambda) for a soft 2D family over (lambda, R)",
               with_common({opt("shape", K::text, "soft profile", "disc", {"disc", "parabolic", "cone", "shell"}),
                            req("lambda", K::nonnegative_list, "strengths, descending"),
                            req("R", K::positive_list, "outer radii")},
                           true),
               {}, {}});
  s.push_back({"gp2d", "2D GP minimizer, scaling identity and energies",
               with_common({opt("trap", K::potential_list, "traps of unit length", "harmonic"),
                            opt("Ng", K::nonnegative_list, "drives Ng, ascending", "0"),
                            opt("N", K::positive, "particle number", "1"),
                            opt("L", K::positive, "trap length for the scaling check", "1"),
                            opt("dr", K::nonnegative, "radial spacing, 0 for the default", "0"),
                            opt("r_max", K::nonnegative, "radial extent, 0 for the truncation rule", "0"),
                            opt("tol", K::positive, "energy tolerance", "1e-10")}),
               {}, {}});
  s.push_back({"gp3d", "3D GP minimizer in a slab of thickness h",
               with_common({opt("trap", K::potential, "in-plane trap", "harmonic"),
                            opt("transverse", K::potential, "transverse potential", "harmonic"),
                            req("h", K::positive, "thickness"),
                            opt("Na", K::nonnegative_list, "couplings Na", "0"),
                            opt("dr", K::nonnegative, "radial spacing, 0 for the default", "0"),
                            opt("dz_over_h", K::nonnegative, "dz / h, 0 for the default", "0"),
                            opt("modes", K::integer, "transverse modes", "16"),
                            opt("tol", K::positive, "energy tolerance", "1e-12")}),
               {}, {}});
  s.push_back({"tf", "Thomas-Fermi solution, or E_GP/E_TF along an Ng ladder",
               with_common({opt("trap", K::potential, "trap", "harmonic"),
                            opt("N", K::positive_list, "particle numbers"),
                            opt("coupling", K::positive, "coupling for the N rows", "1"),
                            opt("Ng", K::nonnegative_list, "GP/TF ladder, ascending"),
                            opt("dr", K::nonnegative, "GP radial spacing, 0 for the default", "0"),
                            opt("tol", K::nonnegative, "GP tolerance, 0 for the default", "0")},
                           true),
               {}, {{"N", "Ng"}}});
  s.push_back({"selfg", "self-consistent coupling g",
               with_common({req("N", K::positive, "particle number"), req("L", K::positive, "trap length"),
                            req("h", K::positive, "thickness"), req("a", K::positive, "3D scattering length"),
                            opt("trap", K::potential, "trap of unit length", "harmonic"),
                            opt("transverse", K::potential, "transverse potential", "harmonic"),
                            opt("damping", K::positive, "damping of the fixed-point iteration", "0.5"),
                            opt("tol", K::positive, "relative tolerance", "1e-8"),
                            opt("scan_points", K::integer, "points of the root scan, 0 to skip", "0")}),
               {}, {}});
  s.push_back({"regime", "coupling g, region and confinement, one row per input tuple",
               with_common({req("rho_bar", K::positive_list, "mean densities"),
                            req("h", K::positive_list, "thicknesses"),
                            opt("a", K::positive_list, "3D scattering lengths"),
                            opt("ln_a2d", K::real_list, "ln of the 2D scattering lengths"),
                            opt("s4", K::positive, "int s^4 of the unit mode (default from transverse)"),
                            opt("transverse", K::potential, "transverse potential", "harmonic"),
                            opt("Ng", K::nonnegative_list, "drives, for the Ng class"),
                            opt("region_factor", K::positive, "q band factor", "4"),
                            opt("small", K::positive, "strong confinement threshold", "0.1")}),
               {}, {{"a", "ln_a2d"}}});
  s.push_back({"temple", "Temple lower bound against the Rayleigh quotient",
               with_common({opt("potential", K::potential_list, "1D Hamiltonians",
                                "harmonic, quartic, harmonic-bump:3:0.5"),
                            opt("z_max", K::positive, "half-width of the grid", "10"),
                            opt("points", K::integer, "grid points", "4001"),
                            opt("widths", K::positive_list, "Gaussian trial widths", "1.6, 1.3, 1.1, 1.02"),
                            opt("t", K::nonnegative_list, "perturbations of the ground vector", "3e-2, 3e-3, 3e-4, 0")}),
               {}, {}});
  s.push_back({"dyson", "Dyson lemma: recursion, nu asymptote, 3D normalization",
               with_common({opt("parts", K::text_list, "parts to run", "recursion, nu, u3d",
                                {"recursion", "nu", "u3d"}),
                            opt("w", K::potential_list, "2D potentials for the recursion",
                                "disc:0.2:1, parabolic:1:1, cone:5:1, shell:0.5:1"),
                            opt("epsilon", K::positive_list, "kinetic fractions", "0.3, 1"),
                            opt("R_prime", K::positive_list, "outer radii", "2, 10"),
                            opt("nu_potential", K::potential, "2D potential for nu", "hard-core:1"),
                            opt("nu_R", K::positive, "inner radius of U~", "2"),
                            opt("nu_epsilon", K::positive, "kinetic fraction for nu", "1"),
                            opt("nu_ratio", K::positive_list, "R~ / a_scatt ladder", "10, 100, 1000, 10000"),
                            opt("points_per_decade", K::integer, "nu quadrature density", "64"),
                            opt("u3d_R", K::positive_list, "radii of U_R", "0.1, 1, 7")}),
               {}, {}});
  s.push_back({"crossover", "3D to 2D GP crossover at fixed g along an h ladder",
               with_common({req("h", K::positive_list, "thicknesses, descending"),
                            opt("g", K::positive, "2D coupling", "0.5"),
                            opt("trap", K::potential, "in-plane trap", "harmonic"),
                            opt("transverse", K::potential, "transverse potential", "harmonic"),
                            opt("dr", K::nonnegative, "radial spacing, 0 for the default", "0"),
                            opt("dz_over_h", K::nonnegative, "dz / h, 0 for the default", "0"),
                            opt("modes", K::integer, "transverse modes, 0 for the default", "0"),
                            opt("tol", K::nonnegative, "energy tolerance, 0 for the default", "0")},
                           true),
               {}, {}});
  s.push_back({"phase", "region map over (h/a, rho_bar h^2)",
               with_common({req("h_over_a", K::positive_list, "columns"),
                            req("rho_h2", K::positive_list, "rows"),
                            opt("transverse", K::potential, "transverse potential", "harmonic"),
                            opt("region_factor", K::positive, "q band factor", "4"),
                            opt("small", K::positive, "strong confinement threshold", "0.1")},
                           true),
               {}, {}});
  return s;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos)
    return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos)
      break;
    start = pos + 1;
  }
  return out;
}

std::optional<double> to_double(std::string_view s) {
  const std::string t = trim(s);
  double v = 0.0;
  const char *b = t.data(), *e = t.data() + t.size();
  if (!t.empty() && *b == '+')
    ++b;
  const auto [p, ec] = std::from_chars(b, e, v);
  if (t.empty() || ec != std::errc() || p != e)
    return std::nullopt;
  return v;
}

std::optional<std::int64_t> to_int(std::string_view s) {
  const std::string t = trim(s);
  std::int64_t v = 0;
  const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || p != t.data() + t.size())
    return std::nullopt;
  return v;
}

std::optional<bool> to_bool(std::string_view s) {
  const std::string t = trim(s);
  if (t == "true" || t == "1" || t == "yes" || t == "on")
    return true;
  if (t == "false" || t == "0" || t == "no" || t == "off")
    return false;
  return std::nullopt;
}

// Empty string when valid, else the reason.
std::string check_value(const KeySpec &k, const std::string &v, const std::filesystem::path &base) {
  const auto in_choices = [&](const std::string &x) {
    return k.choices.empty() || std::find(k.choices.begin(), k.choices.end(), x) != k.choices.end();
  };
  const auto choice_list = [&] {
    std::string s;
    for (const auto &c : k.choices)
      s += (s.empty() ? "" : ", ") + c;
    return s;
  };
  switch (k.kind) {
  case K::positive:
  case K::nonnegative:
  case K::real: {
    const auto x = to_double(v);
    if (!x || !std::isfinite(*x))
      return "expected a finite number, got '" + v + "'";
    if (k.kind == K::positive && !(*x > 0.0))
      return "must be positive, got " + v;
    if (k.kind == K::nonnegative && *x < 0.0)
      return "must be nonnegative, got " + v;
    return {};
  }
  case K::integer: {
    const auto x = to_int(v);
    if (!x || *x < 0)
      return "expected a nonnegative integer, got '" + v + "'";
    return {};
  }
  case K::flag:
    return to_bool(v) ? std::string{} : "expected true or false, got '" + v + "'";
  case K::text:
    return in_choices(trim(v)) ? std::string{} : "must be one of " + choice_list() + ", got '" + v + "'";
  case K::text_list:
    for (const auto &x : split(v, ','))
      if (x.empty() || !in_choices(x))
        return "entries must be among " + choice_list() + ", got '" + x + "'";
    return {};
  case K::potential:
  case K::potential_list:
    try {
      const auto parts = k.kind == K::potential ? std::vector<std::string>{trim(v)} : split(v, ',');
      for (const auto &p : parts)
        (void)parse_potential(p, base);
    } catch (const Error &e) {
      return e.what();
    }
    return {};
  case K::positive_list:
  case K::nonnegative_list:
  case K::real_list:
    try {
      const auto xs = parse_list(v);
      if (xs.empty())
        return "empty list";
      for (double x : xs)
        if (!std::isfinite(x) || (k.kind != K::real_list && (x < 0.0 || (x == 0.0 && k.kind == K::positive_list))))
          return std::string("entries must be ") +
                 (k.kind == K::positive_list ? "positive" : k.kind == K::real_list ? "finite" : "nonnegative") +
                 ", got '" + v + "'";
    } catch (const Error &e) {
      return e.what();
    }
    return {};
  }
  return {};
}

void apply(std::map<std::string, std::string> &into, std::set<std::string> &given, const std::string &key,
           const std::string &value) {
  into[key] = value;
  given.insert(key);
}

} // namespace

const std::vector<CommandSpec> &command_specs() {
  static const std::vector<CommandSpec> specs = build_specs();
  return specs;
}

const CommandSpec *find_command(std::string_view name) {
  for (const auto &c : command_specs())
    if (c.name == name)
      return &c;
  return nullptr;
}

ConfigError::ConfigError(std::vector<std::string> violations)
    : InvalidInput([&] {
        std::string s = "invalid configuration:";
        for (const auto &v : violations)
          s += "\n  " + v;
        return s;
      }()),
      violations_(std::move(violations)) {}

std::vector<double> parse_list(std::string_view text) {
  const std::string t = trim(text);
  if (t.rfind("geometric:", 0) == 0) {
    const auto parts = split(t, ':');
    const auto bad = [&] { return InvalidInput("expected geometric:first:last:count, got '" + t + "'"); };
    if (parts.size() != 4)
      throw bad();
    const auto a = to_double(parts[1]), b = to_double(parts[2]);
    const auto n = to_int(parts[3]);
    if (!a || !b || !n || *n < 2)
      throw bad();
    return experiments::geometric_ladder(*a, *b, static_cast<std::size_t>(*n));
  }
  std::vector<double> out;
  for (const auto &x : split(t, ',')) {
    const auto v = to_double(x);
    if (!v)
      throw InvalidInput("expected a number, got '" + x + "'");
    out.push_back(*v);
  }
  return out;
}

Potential parse_potential(std::string_view spec, const std::filesystem::path &base_dir) {
  const std::string s = trim(spec);
  const auto colon = s.find(':');
  const std::string name = s.substr(0, colon);
  if (name == "tabulated") {
    if (colon == std::string::npos || colon + 1 == s.size())
      throw InvalidInput("tabulated potential needs a path: tabulated:path");
    std::filesystem::path p = s.substr(colon + 1);
    if (p.is_relative() && !base_dir.empty())
      p = base_dir / p;
    return Potential::tabulated_file(p);
  }
  std::vector<double> params;
  if (colon != std::string::npos)
    for (const auto &x : split(std::string_view(s).substr(colon + 1), ':')) {
      const auto v = to_double(x);
      if (!v || !std::isfinite(*v))
        throw InvalidInput("potential '" + s + "': parameter '" + x + "' is not a number");
      params.push_back(*v);
    }
  const auto need = [&](std::size_t lo, std::size_t hi) {
    if (params.size() < lo || params.size() > hi)
      throw InvalidInput("potential '" + s + "': expected " + std::to_string(lo) +
                         (hi > lo ? "-" + std::to_string(hi) : "") + " parameters");
  };
  if (name == "disc" || name == "parabolic" || name == "cone" || name == "shell") {
    need(2, 2);
    return Potential::soft_2d(name, params[0], params[1]);
  }
  if (name == "harmonic" || name == "quartic" || name == "zero") {
    need(0, 0);
    return potential_by_name(name);
  }
  if (name == "box") {
    need(0, 1);
    return Potential::box(params.empty() ? 1.0 : params[0]);
  }
  if (name == "power" || name == "hard-core") {
    need(1, 1);
    return potential_by_name(name, params[0]);
  }
  if (name == "square-barrier" || name == "harmonic-bump") {
    need(2, 2);
    return potential_by_name(name, params[0], params[1]);
  }
  throw InvalidInput("unknown potential '" + name + "'");
}

RunConfig parse_config(std::string_view text, const std::vector<std::string> &args,
                       const std::filesystem::path &base_dir) {
  std::vector<std::string> errors;
  std::map<std::string, std::string> file_values, flag_values;
  std::set<std::string> given;

  int line_no = 0;
  std::istringstream in{std::string(text)};
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    const auto hash = line.find('#');
    const std::string body = trim(line.substr(0, hash));
    if (body.empty())
      continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      errors.push_back("line " + std::to_string(line_no) + ": expected key = value");
      continue;
    }
    const std::string key = trim(body.substr(0, eq));
    if (key.empty()) {
      errors.push_back("line " + std::to_string(line_no) + ": empty key");
      continue;
    }
    if (file_values.count(key))
      errors.push_back(key + ": set twice in the config file");
    file_values[key] = trim(body.substr(eq + 1));
  }

  std::string arg_command;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const std::string &a = args[i];
    if (a.rfind("--", 0) != 0) {
      if (i == 0 && arg_command.empty()) {
        arg_command = a;
        continue;
      }
      errors.push_back("unexpected argument '" + a + "'");
      continue;
    }
    std::string key = a.substr(2), value;
    const auto eq = key.find('=');
    if (eq != std::string::npos) {
      value = key.substr(eq + 1);
      key = key.substr(0, eq);
    } else if (i + 1 < args.size() && args[i + 1].rfind("--", 0) != 0) {
      value = args[++i];
    } else {
      value = "true"; // bare flag
    }
    flag_values[key] = value;
  }

  std::string command = arg_command;
  if (auto it = file_values.find("command"); it != file_values.end()) {
    if (!command.empty() && command != it->second)
      errors.push_back("command: config file says '" + it->second + "' but the command line says '" +
                       command + "'");
    if (command.empty())
      command = it->second;
    file_values.erase(it);
  }
  if (auto it = flag_values.find("command"); it != flag_values.end()) {
    if (!command.empty() && command != it->second)
      errors.push_back("command: given twice with different values");
    command = it->second;
    flag_values.erase(it);
  }

  RunConfig cfg;
  cfg.base_dir = base_dir;
  const CommandSpec *spec = find_command(command);
  if (!spec) {
    errors.push_back(command.empty() ? std::string("command: missing subcommand")
                                     : "command: unknown subcommand '" + command + "'");
    throw ConfigError(std::move(errors));
  }
  cfg.command = command;

  for (const auto &[k, v] : file_values)
    apply(cfg.values, given, k, v);
  for (const auto &[k, v] : flag_values)
    apply(cfg.values, given, k, v);

  for (const auto &[k, v] : cfg.values) {
    const auto ks = std::find_if(spec->keys.begin(), spec->keys.end(), [&](const KeySpec &s) { return s.key == k; });
    if (ks == spec->keys.end()) {
      errors.push_back(k + ": unknown key for '" + command + "'");
      continue;
    }
    if (const std::string why = check_value(*ks, v, base_dir); !why.empty())
      errors.push_back(k + ": " + why);
  }
  for (const auto &ks : spec->keys)
    if (ks.required && !cfg.values.count(ks.key))
      errors.push_back(ks.key + ": required by '" + command + "'");
  const auto count_set = [&](const std::vector<std::string> &group) {
    return std::count_if(group.begin(), group.end(), [&](const std::string &k) { return cfg.values.count(k) > 0; });
  };
  const auto names = [](const std::vector<std::string> &group) {
    std::string s;
    for (const auto &k : group)
      s += (s.empty() ? "" : ", ") + k;
    return s;
  };
  for (const auto &group : spec->exclusive)
    if (count_set(group) > 1)
      errors.push_back(names(group) + ": over-specified, give only one");
  for (const auto &group : spec->one_of) {
    const auto n = count_set(group);
    if (n > 1)
      errors.push_back(names(group) + ": over-specified, give only one");
    else if (n == 0)
      errors.push_back(names(group) + ": give one of these keys");
  }
  if (!errors.empty())
    throw ConfigError(std::move(errors));

  for (const auto &ks : spec->keys)
    if (!cfg.values.count(ks.key) && ks.default_value)
      cfg.values[ks.key] = *ks.default_value;
  cfg.given = std::move(given);
  return cfg;
}

RunConfig load_config(const std::filesystem::path &path, const std::vector<std::string> &args) {
  std::ifstream f(path);
  if (!f)
    throw ConfigError({"config: cannot read '" + path.string() + "'"});
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str(), args, path.parent_path());
}

const std::string &RunConfig::text(const std::string &key) const {
  const auto it = values.find(key);
  if (it == values.end())
    throw InvalidInput(key + ": not set");
  return it->second;
}

double RunConfig::number(const std::string &key) const {
  const auto v = to_double(text(key));
  if (!v)
    throw InvalidInput(key + ": not a number");
  return *v;
}

std::optional<double> RunConfig::optional_number(const std::string &key) const {
  if (!has(key))
    return std::nullopt;
  return number(key);
}

std::int64_t RunConfig::integer(const std::string &key) const {
  const auto v = to_int(text(key));
  if (!v)
    throw InvalidInput(key + ": not an integer");
  return *v;
}

bool RunConfig::flag(const std::string &key) const {
  const auto v = to_bool(text(key));
  if (!v)
    throw InvalidInput(key + ": not a flag");
  return *v;
}

std::vector<double> RunConfig::list(const std::string &key) const {
  return has(key) ? parse_list(text(key)) : std::vector<double>{};
}

std::vector<std::string> RunConfig::text_list(const std::string &key) const {
  return has(key) ? split(text(key), ',') : std::vector<std::string>{};
}

Potential RunConfig::potential(const std::string &key) const { return parse_potential(text(key), base_dir); }

std::vector<Potential> RunConfig::potentials(const std::string &key) const {
  std::vector<Potential> out;
  if (has(key))
    for (const auto &p : split(text(key), ','))
      out.push_back(parse_potential(p, base_dir));
  return out;
}

} // namespace q2d::cli
