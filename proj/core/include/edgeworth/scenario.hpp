#pragma once

// Scenario files: one JSON document describing the agents' preferences and
// endowments, the picking probabilities of the trade network, and optional
// integrator settings.
//
//   {
//     "name": "table1_row1",
//     "description": "...",
//     "goods": ["good 1", "good 2"],
//     "agents": [
//       {"label": "agent 1", "exponents": [0.5, 0.5], "endowment": [3.0, 1.0]},
//       ...
//     ],
//     "network": {"probabilities": [0.3333333333333333, ...]},
//     "integrator": {"relative_error_target": 1e-10, ...}
//   }

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "edgeworth/economy.hpp"
#include "edgeworth/integrate.hpp"
#include "edgeworth/networks.hpp"

namespace edgeworth {

struct Scenario {
  std::string name;
  std::string description;
  std::vector<std::string> good_labels;
  std::vector<std::string> agent_labels;
  UtilityParams params;
  Allocation endowments;
  Vector probabilities;
  IntegratorConfig integrator;

  [[nodiscard]] int agents() const { return endowments.agents(); }
  [[nodiscard]] int goods() const { return endowments.goods(); }
  [[nodiscard]] NetworkSpec network() const { return weights_from_probabilities(probabilities); }
};

// Parses and validates a scenario document. Errors carry the JSON path of
// the offending field, e.g. "agents[1].endowment[0]".
Scenario parse_scenario(std::string_view text, std::string_view origin = "<scenario>");
Scenario load_scenario(const std::filesystem::path& path);

// Serializes back to the file format (full round-trip precision).
std::string scenario_to_json(const Scenario& scenario);

// "key=value,key=value" over IntegratorConfig field names.
void apply_tolerance_overrides(IntegratorConfig& config, std::string_view overrides);

// Directory holding the bundled scenarios. EDGEWORTH_SCENARIO_DIR in the
// environment takes precedence over the compiled-in location.
std::filesystem::path bundled_scenario_dir();

struct BundledScenario {
  std::string name;
  std::string description;
  std::filesystem::path path;
  int agents = 0;
  int goods = 0;
};

std::vector<BundledScenario> list_bundled_scenarios(const std::filesystem::path& dir = bundled_scenario_dir());

// A path to an existing file, or the name of a bundled scenario.
Scenario resolve_scenario(std::string_view name_or_path);

IntegrationResult integrate_to_equilibrium(const Scenario& scenario);

}  // namespace edgeworth
