// sim: scenario runner.
//
//   sim list
//   sim preset <name> [key=value]...
//   sim run <config>

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dfsim/cli/presets.hpp"
#include "dfsim/errors.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Collective-decay and dark-state scenario runner"};
  app.set_version_flag("--version", dfsim::cli::kVersion);
  app.require_subcommand(1);

  auto* list = app.add_subcommand("list", "List the available presets");

  std::string preset_name;
  std::vector<std::string> overrides;
  auto* preset = app.add_subcommand("preset", "Run a named preset with key=value overrides");
  preset->add_option("name", preset_name, "Preset name")->required();
  preset->add_option("overrides", overrides, "Parameters as key=value");

  std::string config_path;
  std::vector<std::string> run_overrides;
  auto* run = app.add_subcommand("run", "Run the scenario described by a config file");
  run->add_option("config", config_path, "Config file")->required();
  run->add_option("overrides", run_overrides, "Parameters as key=value, applied after the file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*list) {
      std::cout << dfsim::cli::list_presets();
      return 0;
    }
    dfsim::cli::Config cfg;
    if (*run) {
      cfg = dfsim::cli::Config::load(config_path);
      for (const auto& kv : run_overrides) cfg.set(kv);
    } else {
      for (const auto& kv : overrides) cfg.set(kv);
      cfg.set("preset", preset_name);
    }
    return dfsim::cli::run_scenario(cfg, std::cout, std::cerr);
  } catch (const dfsim::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
