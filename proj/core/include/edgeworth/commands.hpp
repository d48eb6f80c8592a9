#pragma once

// Command implementations behind the `edgeworth` CLI. Each returns a
// process exit code and writes its artifacts into an output directory.

#include <filesystem>
#include <ostream>

#include "edgeworth/scenario.hpp"

namespace edgeworth {

enum ExitCode : int {
  kExitOk = 0,
  kExitValidation = 2,
  kExitIntegration = 3,
  kExitPartialSweep = 4,
};

// Maps an exception escaping a command to its exit code.
int exit_code_for(const std::exception& e);

// trajectory.csv, equilibrium.json, invariants.json.
int run_simulate(const Scenario& scenario, const std::filesystem::path& out_dir, std::ostream& log);

// manifold.csv, summary.json.
int run_sweep_command(const Scenario& scenario, int resolution, int workers, const std::filesystem::path& out_dir,
                      std::ostream& log);

// Reads {"gradients": [[mu_1...], [mu_2...], ...]} and prints the
// multilateral solution as JSON.
int run_existence(const std::filesystem::path& gradient_file, std::ostream& out);

// walras_compare.json, fair_path.csv, walras_path.csv.
int run_walras_compare(const Scenario& scenario, const std::filesystem::path& out_dir, std::ostream& log);

int run_scenarios_list(std::ostream& out);

}  // namespace edgeworth
