#include <filesystem>
#include <fstream>
#include <sstream>

#include <doctest.h>
#include <json.hpp>

#include "edgeworth/commands.hpp"
#include "edgeworth/errors.hpp"

using namespace edgeworth;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

json read_json(const fs::path& p) {
  std::ifstream in(p);
  REQUIRE(in.good());
  return json::parse(in);
}

std::string first_line(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  return line;
}

}  // namespace

TEST_CASE("exit codes") {
  CHECK(exit_code_for(ValidationError("x")) == kExitValidation);
  CHECK(exit_code_for(ParseError("x")) == kExitValidation);
  CHECK(exit_code_for(BoundaryError("x")) == kExitValidation);
  CHECK(exit_code_for(IntegrationError("x")) == kExitIntegration);
  CHECK(exit_code_for(BoundaryApproachError("x")) == kExitIntegration);
}

TEST_CASE("simulate writes the equilibrium record and invariants") {
  TempDir dir("edgeworth_cmd_simulate");
  std::ostringstream log;
  CHECK(run_simulate(resolve_scenario("symmetric_pair"), dir.path, log) == kExitOk);

  CHECK(first_line(dir.path / "trajectory.csv") == "t,x_1_1,x_1_2,x_2_1,x_2_2,U_1,U_2,potential");
  const json eq = read_json(dir.path / "equilibrium.json");
  CHECK(eq["status"] == "Converged");
  CHECK(eq["final"][0][0].get<double>() == doctest::Approx(2.0).epsilon(1e-5));
  CHECK(eq["utility_gains"][1].get<double>() == doctest::Approx(2.0 - std::sqrt(3.0)).epsilon(1e-5));

  const json inv = read_json(dir.path / "invariants.json");
  CHECK(inv["conservation_ok"] == true);
  CHECK(inv["equal_gains"]["passed"] == true);
  CHECK_FALSE(inv.contains("star_split"));
}

TEST_CASE("simulate reports the star split for a star network") {
  TempDir dir("edgeworth_cmd_star");
  Scenario s = resolve_scenario("table1_row1");
  s.probabilities = star(1, 3);
  std::ostringstream log;
  CHECK(run_simulate(s, dir.path, log) == kExitOk);
  const json inv = read_json(dir.path / "invariants.json");
  REQUIRE(inv.contains("star_split"));
  CHECK(inv["star_split"]["center"] == 2);
  CHECK(inv["star_split"]["relative_error"].get<double>() <= 1e-3);
}

TEST_CASE("simulate exits nonzero when the path reaches the boundary") {
  TempDir dir("edgeworth_cmd_boundary");
  Scenario s = resolve_scenario("symmetric_pair");
  s.params = UtilityParams::two_good({0.9, 0.1});
  s.endowments = Allocation::from_bundles({{1, 3}, {3, 1}});
  s.integrator.boundary_floor = 0.5;
  std::ostringstream log;
  CHECK(run_simulate(s, dir.path, log) == kExitIntegration);
  CHECK(read_json(dir.path / "equilibrium.json")["status"] == "BoundaryApproach");
}

TEST_CASE("sweep command writes manifold and summary") {
  TempDir dir("edgeworth_cmd_sweep");
  std::ostringstream log;
  CHECK(run_sweep_command(resolve_scenario("table1_row2"), 3, 2, dir.path, log) == kExitOk);
  const json summary = read_json(dir.path / "summary.json");
  CHECK(summary["points"] == 10);
  CHECK(summary["publishable"] == true);
  CHECK(summary["agents"].size() == 3);
  CHECK(summary["flagged_points"].empty());
  CHECK(summary.contains("barycenter_gain_shares"));
  CHECK(first_line(dir.path / "manifold.csv").rfind("index,p_1,p_2,p_3,r,g,b", 0) == 0);
}

TEST_CASE("sweep command flags non-converged points with exit code 4") {
  TempDir dir("edgeworth_cmd_partial");
  Scenario s = resolve_scenario("table1_row2");
  s.integrator.max_steps = 2;
  std::ostringstream log;
  CHECK(run_sweep_command(s, 2, 1, dir.path, log) == kExitPartialSweep);
  const json summary = read_json(dir.path / "summary.json");
  CHECK(summary["publishable"] == false);
  CHECK(summary["flagged_points"].size() == 6);
}

TEST_CASE("existence command") {
  TempDir dir("edgeworth_cmd_existence");
  const fs::path file = dir.path / "gradients.json";
  std::ofstream(file) << R"({"gradients": [[2, 1, 1], [1, 2, 1], [1, 1, 2]]})";
  std::ostringstream out;
  CHECK(run_existence(file, out) == kExitOk);
  const json j = json::parse(out.str());
  CHECK(j["trade_exists"] == false);
  CHECK(j["nullspace_dimension"] == 0);
  CHECK(j["agents"] == 3);

  std::ofstream(file) << R"({"gradients": [[1, 0.2, 0.5, 0.3], [0.3, 1, 0.2, 0.6], [0.4, 0.4, 1, 0.1]]})";
  std::ostringstream out2;
  CHECK(run_existence(file, out2) == kExitOk);
  CHECK(json::parse(out2.str())["trade_exists"] == true);

  std::ofstream(file) << R"({"gradients": [[1, 2], [1, 2, 3]]})";
  std::ostringstream out3;
  CHECK_THROWS_AS(run_existence(file, out3), DimensionError);

  std::ofstream(file) << "{oops";
  CHECK_THROWS_AS(run_existence(file, out3), ParseError);
  CHECK_THROWS_AS(run_existence(dir.path / "missing.json", out3), ParseError);
}

TEST_CASE("walras-compare command") {
  TempDir dir("edgeworth_cmd_walras");
  std::ostringstream log;
  CHECK(run_walras_compare(resolve_scenario("fig1_asymmetric"), dir.path, log) == kExitOk);
  const json j = read_json(dir.path / "walras_compare.json");
  CHECK(j["equal_gains"]["passed"] == true);
  CHECK(j["walras"]["trades"] == true);
  CHECK(j["fair"]["trades"] == true);
  CHECK(j["equilibrium_distance"].get<double>() > 1e-3);
  CHECK(j["fair_path_slope"]["min"].get<double>() == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(j["fair_path_slope"]["max"].get<double>() == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(fs::exists(dir.path / "fair_path.csv"));
  CHECK(first_line(dir.path / "walras_path.csv") == "s,x_1_1,x_1_2,x_2_1,x_2_2,U_1,U_2");

  Scenario three = resolve_scenario("table1_row1");
  CHECK_THROWS_AS(run_walras_compare(three, dir.path, log), DimensionError);
}

TEST_CASE("scenarios list") {
  std::ostringstream out;
  CHECK(run_scenarios_list(out) == kExitOk);
  CHECK(out.str().find("symmetric_pair") != std::string::npos);
  CHECK(out.str().find("table1_row5") != std::string::npos);
}
