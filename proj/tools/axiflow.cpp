#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "axiflow/app.hpp"
#include "axiflow/config.hpp"

int main(int argc, char** argv) {
  CLI::App cli{"Steady axisymmetric subsonic nozzle flow: solve, sweep, critical flux, diagnose"};
  cli.require_subcommand(1);

  std::string config_path;
  axiflow::RunOptions options;
  std::string out_dir;
  for (const char* name : {"solve", "sweep", "critical", "diagnose"}) {
    auto* sub = cli.add_subcommand(name, std::string(name) + " using the given config");
    sub->add_option("--config", config_path, "INI config file")->required()->check(CLI::ExistingFile);
    sub->add_option("--jobs", options.jobs, "worker threads for sweeps")->check(CLI::PositiveNumber);
    sub->add_option("--out", out_dir, "output directory (overrides [output] directory)");
  }
  CLI11_PARSE(cli, argc, argv);

  const auto command = axiflow::command_from_string(cli.get_subcommands().front()->get_name());
  if (!out_dir.empty()) options.out_dir = out_dir;

  std::ifstream in(config_path, std::ios::binary);
  std::stringstream text;
  text << in.rdbuf();
  axiflow::RunConfig config;
  try {
    config = axiflow::parse_config(text.str());
  } catch (const axiflow::ConfigError& e) {
    std::cerr << config_path << ": " << e.what() << '\n';
    return axiflow::kExitUsage;
  }
  return axiflow::run(command, config, options, std::cerr);
}
