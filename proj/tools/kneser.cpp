// kneser: scenario-driven harmonic-extension checks.

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

#include "kneser/commands.hpp"
#include "kneser/scenario.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Poisson extension, boundary operator T[f] and quasiconformality checks"};
  app.require_subcommand(1, 1);

  std::string scenario_path, out_dir, grid_text;
  std::optional<std::size_t> nodes;
  for (const auto& name : kneser::command_names()) {
    auto* sub = app.add_subcommand(name, "run the " + name + " command");
    sub->add_option("--scenario", scenario_path, "scenario JSON file")->required();
    sub->add_option("--out", out_dir, "directory for CSV/JSON artifacts");
    sub->add_option("--nodes", nodes, "quadrature nodes N (power of two)");
    sub->add_option("--grid", grid_text, "polar grid RxT, e.g. 64x256");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    std::cout << kneser::error_report(kneser::ErrorCode::InvalidSpec, e.what()).dump(2) << "\n";
    return 2;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    const kneser::Scenario scenario = kneser::load_scenario(scenario_path);
    kneser::CommandOptions options;
    options.out_dir = out_dir;
    options.nodes = nodes;
    if (!grid_text.empty()) options.grid = kneser::parse_grid(grid_text);
    const auto result = kneser::run_command(command, scenario, options);
    std::cout << result.report.dump(2) << "\n";
    return result.exit_code;
  } catch (const kneser::Error& e) {
    std::cout << kneser::error_report(e.code(), e.what()).dump(2) << "\n";
    return kneser::exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cout << kneser::error_report(kneser::ErrorCode::NumericalGuard, e.what()).dump(2) << "\n";
    return 3;
  }
}
