#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "edgeworth/commands.hpp"
#include "edgeworth/errors.hpp"
#include "edgeworth/scenario.hpp"

namespace {

edgeworth::Scenario load(const std::string& name, const std::string& overrides, int stride) {
  edgeworth::Scenario s = edgeworth::resolve_scenario(name);
  if (!overrides.empty()) edgeworth::apply_tolerance_overrides(s.integrator, overrides);
  if (stride > 0) s.integrator.stride = stride;
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fair-trading Edgeworth processes on weighted networks"};
  app.require_subcommand(1);

  std::string scenario;
  std::string out_dir = "out";
  std::string overrides;
  int stride = 0;
  int resolution = 12;
  int workers = 0;
  std::string gradient_file;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--scenario", scenario, "Scenario file or bundled scenario name")->required();
    cmd->add_option("--out", out_dir, "Output directory");
    cmd->add_option("--tolerance-overrides", overrides, "Integrator overrides, key=val,...");
    cmd->add_option("--stride", stride, "Keep every s-th accepted step in trajectories")->check(CLI::PositiveNumber);
  };

  auto* simulate = app.add_subcommand("simulate", "Integrate one scenario to its equilibrium");
  add_common(simulate);

  auto* sweep = app.add_subcommand("sweep", "Integrate every network on a simplex grid");
  add_common(sweep);
  sweep->add_option("--resolution", resolution, "Grid resolution r (points k/r)");
  sweep->add_option("--workers", workers, "Worker threads (default: hardware concurrency)");

  auto* existence = app.add_subcommand("existence", "Check existence of multilateral fair trade");
  existence->add_option("gradients", gradient_file, "JSON file {\"gradients\": [[...], ...]}")->required();

  auto* walras = app.add_subcommand("walras-compare", "Compare the fair and Walrasian equilibria (n=2, m=2)");
  add_common(walras);

  auto* scenarios = app.add_subcommand("scenarios", "Bundled scenarios");
  scenarios->require_subcommand(1);
  auto* list = scenarios->add_subcommand("list", "List bundled scenarios");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*simulate) return edgeworth::run_simulate(load(scenario, overrides, stride), out_dir, std::cout);
    if (*sweep) {
      if (resolution < 1) throw edgeworth::RangeError("--resolution must be at least 1");
      return edgeworth::run_sweep_command(load(scenario, overrides, stride), resolution, workers, out_dir, std::cout);
    }
    if (*existence) return edgeworth::run_existence(gradient_file, std::cout);
    if (*walras) return edgeworth::run_walras_compare(load(scenario, overrides, stride), out_dir, std::cout);
    if (*list) return edgeworth::run_scenarios_list(std::cout);
  } catch (const edgeworth::Error& e) {
    const int code = edgeworth::exit_code_for(e);
    std::cerr << "error: " << e.what() << "\n";
    std::cout << "{\"status\": \"" << (code == edgeworth::kExitIntegration ? "IntegrationError" : "ValidationError")
              << "\"}\n";
    return code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return edgeworth::kExitValidation;
  }
  return edgeworth::kExitValidation;
}
