#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "levylmm/lmm_dynamics.hpp"
#include "levylmm/simulator.hpp"

namespace levylmm {

struct CapletRequest {
  double fixing = 0.0;
  double strike = 0.0;
};

struct ExtensionRequest {
  PiecewiseConstant lambda{0.0};
  std::optional<double> initial_rate;  // curve-implied when absent
};

// Fully validated batch-run description: model, discretization and the
// per-command requests. Defaults: step = delta/8, 100000 paths, seed 42,
// spot-LIBOR measure, log-linear curve.
struct Scenario {
  ModelSpec model;
  SimConfig config;
  std::vector<double> maturities;               // fixings to simulate
  std::vector<double> interpolated_maturities;  // gamma-construction dates
  std::vector<ExtensionRequest> extensions;
  std::optional<CapletRequest> caplet;
};

Scenario parse_scenario(const nlohmann::json& doc,
                        const std::filesystem::path& base_dir = ".");
Scenario parse_scenario_file(const std::filesystem::path& file);

nlohmann::json model_to_json(const ModelSpec& model,
                             const ConditionReport* conditions = nullptr);

// Dispatch for build | extend | interpolate | simulate | validate | price.
// Writes the command's artifacts under out_dir and returns the exit status
// (0 on success; nonzero when a check fails or the input is invalid).
int run_command(const std::string& command, const Scenario& scenario,
                const std::filesystem::path& out_dir);

}  // namespace levylmm
