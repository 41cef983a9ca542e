#include <CLI11.hpp>
#include <cstdint>
#include <iostream>
#include <string>

#include "levylmm/scenario.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Jump-diffusion LIBOR market model toolkit"};
  std::string command;
  std::string scenario_path;
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  int paths = 0;
  double step = 0.0;

  app.add_option("command", command,
                 "build | extend | interpolate | simulate | validate | price")
      ->required();
  app.add_option("--scenario", scenario_path, "scenario JSON file")->required();
  app.add_option("--out", out_dir, "output directory (default .)");
  auto* seed_opt = app.add_option("--seed", seed, "override the scenario seed");
  auto* paths_opt = app.add_option("--paths", paths, "override the path count");
  auto* step_opt = app.add_option("--step", step, "override the step size (years)");

  CLI11_PARSE(app, argc, argv);

  try {
    levylmm::Scenario scenario = levylmm::parse_scenario_file(scenario_path);
    if (*seed_opt) scenario.config.seed = seed;
    if (*paths_opt) scenario.config.n_paths = paths;
    if (*step_opt) scenario.config.step = step;
    scenario.config.validate(scenario.model.grid.delta);
    return levylmm::run_command(command, scenario, out_dir);
  } catch (const std::exception& e) {
    std::cerr << "lmmtool: " << e.what() << "\n";
    return 2;
  }
}
