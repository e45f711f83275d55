#include "q2d/cli/commands.hpp"
#include "q2d/cli/config.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <string>

int main(int argc, char **argv) {
  using namespace q2d::cli;

  CLI::App app{"Quasi-2D Bose gas: scattering, GP energies, regimes and bounds"};
  app.footer("exit codes: 0 ok, 1 assertion or other failure, 2 configuration error, 3 non-convergence\n"
             "Run 'q2d <subcommand> --help' for its keys.");
  app.require_subcommand(0, 1);

  std::string top_config;
  app.add_option("--config", top_config, "key = value file naming its subcommand in `command`");
  std::map<std::string, std::string> config_paths;
  for (const auto &spec : command_specs()) {
    CLI::App *sub = app.add_subcommand(spec.name, spec.summary);
    sub->allow_extras();
    sub->add_option("--config", config_paths[spec.name], "key = value file; flags override it");
    sub->footer(command_help(spec));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_config;
  }

  const auto chosen = app.get_subcommands();
  if (chosen.empty()) {
    if (top_config.empty()) {
      std::cerr << help_text();
      return exit_config;
    }
    try {
      return execute(load_config(top_config), std::cout, std::cerr);
    } catch (const ConfigError &e) {
      std::cerr << top_config << ": " << e.what() << '\n';
      return exit_config;
    }
  }
  CLI::App *sub = chosen.front();
  std::vector<std::string> args{sub->get_name()};
  for (auto &x : sub->remaining())
    args.push_back(x);

  try {
    const std::string &path = config_paths[sub->get_name()];
    const RunConfig cfg = path.empty() ? parse_config("", args) : load_config(path, args);
    return execute(cfg, std::cout, std::cerr);
  } catch (const ConfigError &e) {
    std::cerr << sub->get_name() << ": " << e.what() << '\n';
    return exit_config;
  }
}
