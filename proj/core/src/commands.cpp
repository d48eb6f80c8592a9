#include "edgeworth/commands.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "edgeworth/csv.hpp"
#include "edgeworth/dynamics.hpp"
#include "edgeworth/errors.hpp"
#include "edgeworth/oracles.hpp"
#include "edgeworth/sweep.hpp"

namespace edgeworth {

namespace {

using json = nlohmann::json;

json vector_json(const VectorRef& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

// Agent-major: one array of goods per agent.
json matrix_json(const Matrix& x) {
  json a = json::array();
  for (Eigen::Index i = 0; i < x.cols(); ++i) a.push_back(vector_json(x.col(i)));
  return a;
}

json record_json(const EquilibriumRecord& r) {
  json j;
  j["status"] = std::string(to_string(r.status));
  j["message"] = r.message;
  j["steps"] = r.steps;
  j["elapsed_time"] = r.elapsed_time;
  j["mrs_residual"] = r.mrs_residual;
  j["field_norm"] = r.field_norm;
  j["probabilities"] = vector_json(r.network.probabilities);
  j["weights"] = matrix_json(r.network.weights);
  j["initial"] = matrix_json(r.initial.holdings());
  j["final"] = matrix_json(r.final.holdings());
  j["totals"] = vector_json(r.initial.totals());
  j["initial_utilities"] = vector_json(r.initial_utilities);
  j["final_utilities"] = vector_json(r.final_utilities);
  j["utility_gains"] = vector_json(r.utility_gains);
  return j;
}

std::ofstream open_output(const std::filesystem::path& dir, const std::string& name) {
  std::filesystem::create_directories(dir);
  std::ofstream out(dir / name);
  if (!out) throw Error("cannot write " + (dir / name).string());
  return out;
}

void write_json(const std::filesystem::path& dir, const std::string& name, const json& j) {
  auto out = open_output(dir, name);
  out << j.dump(2) << '\n';
}

bool succeeded(Status s) { return s == Status::Converged || s == Status::AlreadyOptimal; }

}  // namespace

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const IntegrationError*>(&e) != nullptr) return kExitIntegration;
  return kExitValidation;
}

int run_simulate(const Scenario& scenario, const std::filesystem::path& out_dir, std::ostream& log) {
  const IntegrationResult result = integrate_to_equilibrium(scenario);
  const EquilibriumRecord& rec = result.record;

  {
    auto out = open_output(out_dir, "trajectory.csv");
    write_trajectory_csv(out, result.trajectory);
  }
  json record = record_json(rec);
  record["scenario"] = scenario.name;
  write_json(out_dir, "equilibrium.json", record);

  const TrajectoryReport tr = check_trajectory(result.trajectory);
  json inv;
  inv["samples"] = result.trajectory.size();
  inv["max_conservation_drift"] = tr.max_conservation_drift;
  inv["min_potential_increment"] = tr.min_potential_increment;
  inv["min_utility_increment"] = tr.min_utility_increment;
  inv["max_zero_sum_residual"] = tr.max_zero_sum_residual;
  inv["min_utility_rate"] = tr.min_utility_rate;
  inv["all_feasible"] = tr.all_feasible;
  inv["conservation_ok"] = tr.conservation_ok;
  inv["potential_ok"] = tr.potential_ok;
  inv["utilities_ok"] = tr.utilities_ok;
  if (scenario.agents() == 2) {
    const EqualGainsReport eg = equal_gains_check(result.trajectory);
    inv["equal_gains"] = {{"max_deviation", eg.max_deviation}, {"total_gain", eg.total_gain}, {"passed", eg.passed}};
  }
  for (int c = 0; c < scenario.agents(); ++c) {
    if (scenario.agents() >= 3 && scenario.probabilities[c] == 1.0) {
      const double center = rec.utility_gains[c];
      const double peripheral = rec.utility_gains.sum() - center;
      const double total = rec.utility_gains.sum();
      inv["star_split"] = {{"center", c + 1},
                           {"center_gain", center},
                           {"peripheral_gain_sum", peripheral},
                           {"relative_error", total > 0.0 ? std::abs(center - peripheral) / total : 0.0}};
    }
  }
  write_json(out_dir, "invariants.json", inv);

  log << scenario.name << ": " << to_string(rec.status) << " after " << rec.steps << " steps, t = "
      << format_double(rec.elapsed_time) << ", mrs residual " << format_double(rec.mrs_residual) << "\n";
  return succeeded(rec.status) ? kExitOk : kExitIntegration;
}

int run_sweep_command(const Scenario& scenario, int resolution, int workers, const std::filesystem::path& out_dir,
                      std::ostream& log) {
  const ManifoldDataset ds = run_sweep(scenario, resolution, workers);
  {
    auto out = open_output(out_dir, "manifold.csv");
    write_manifold_csv(out, ds);
  }
  json summary;
  summary["scenario"] = scenario.name;
  summary["resolution"] = ds.resolution;
  summary["points"] = ds.records.size();
  summary["non_converged"] = ds.non_converged;
  summary["publishable"] = ds.publishable();
  summary["vertex_dominance"] = ds.vertex_dominance;
  summary["min_pairwise_distance"] = ds.min_pairwise_distance;
  summary["max_adjacent_distance"] = ds.max_adjacent_distance;
  json agents = json::array();
  for (std::size_t i = 0; i < ds.agents.size(); ++i) {
    const AgentSummary& a = ds.agents[i];
    agents.push_back({{"agent", i + 1},
                      {"min_utility", a.min_utility},
                      {"max_utility", a.max_utility},
                      {"argmax_index", a.argmax_index},
                      {"argmax_probabilities", vector_json(ds.grid[a.argmax_index].probabilities)},
                      {"vertex_index", a.vertex_index},
                      {"vertex_utility", a.vertex_utility},
                      {"vertex_dominant", a.vertex_dominant}});
  }
  summary["agents"] = agents;
  if (ds.barycenter_gain_shares) summary["barycenter_gain_shares"] = vector_json(*ds.barycenter_gain_shares);
  json flagged = json::array();
  for (std::size_t g = 0; g < ds.records.size(); ++g) {
    if (!succeeded(ds.records[g].status)) {
      flagged.push_back({{"index", g}, {"status", std::string(to_string(ds.records[g].status))}});
    }
  }
  summary["flagged_points"] = flagged;
  write_json(out_dir, "summary.json", summary);

  log << scenario.name << ": " << ds.records.size() << " grid points, " << ds.non_converged
      << " not converged, vertex dominance " << (ds.vertex_dominance ? "holds" : "fails") << "\n";
  return ds.publishable() ? kExitOk : kExitPartialSweep;
}

int run_existence(const std::filesystem::path& gradient_file, std::ostream& out) {
  std::ifstream in(gradient_file);
  if (!in) throw ParseError("cannot open gradient file " + gradient_file.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(gradient_file.string() + ": " + e.what());
  }
  if (!doc.is_object() || !doc.contains("gradients") || !doc["gradients"].is_array() || doc["gradients"].empty()) {
    throw ParseError("gradients: expected a nonempty array of per-agent gradient arrays");
  }
  const json& rows = doc["gradients"];
  if (!rows[0].is_array() || rows[0].empty()) throw ParseError("gradients[0]: expected an array of numbers");
  const auto m = static_cast<Eigen::Index>(rows[0].size());
  GradientMatrix g{Matrix(m, static_cast<Eigen::Index>(rows.size()))};
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::string path = "gradients[" + std::to_string(i) + "]";
    if (!rows[i].is_array() || static_cast<Eigen::Index>(rows[i].size()) != m) {
      if (!rows[i].is_array()) throw ParseError(path + ": expected an array of numbers");
      throw DimensionError(path + ": expected " + std::to_string(m) + " numbers");
    }
    for (Eigen::Index k = 0; k < m; ++k) {
      if (!rows[i][k].is_number()) throw ParseError(path + "[" + std::to_string(k) + "]: expected a number");
      g.values(k, static_cast<Eigen::Index>(i)) = rows[i][k].get<double>();
    }
  }

  const MultilateralSolution sol = multilateral_fair_solver(g);
  json j;
  j["agents"] = g.agents();
  j["goods"] = g.goods();
  j["nullspace_dimension"] = sol.nullspace_dimension;
  j["trade_exists"] = sol.trade_exists;
  j["max_constraint_residual"] = sol.max_constraint_residual;
  json spaces = json::array();
  for (const Matrix& s : sol.agent_constraint_spaces) spaces.push_back(matrix_json(s));
  j["agent_constraint_spaces"] = spaces;
  json basis = json::array();
  for (const Matrix& b : sol.basis) basis.push_back(matrix_json(b));
  j["basis"] = basis;
  out << j.dump(2) << '\n';
  return kExitOk;
}

int run_walras_compare(const Scenario& scenario, const std::filesystem::path& out_dir, std::ostream& log) {
  if (scenario.agents() != 2 || scenario.goods() != 2) {
    throw DimensionError("walras-compare needs a two-agent, two-good scenario");
  }
  const WalrasResult walras = walras_two_agent_cd(scenario.endowments, scenario.params);
  const IntegrationResult fair = integrate_to_equilibrium(scenario);
  const Trajectory& path = fair.trajectory;

  {
    auto out = open_output(out_dir, "fair_path.csv");
    write_trajectory_csv(out, path);
  }
  const Vector u0 = utilities(scenario.endowments, scenario.params);
  const Vector uw = utilities(walras.allocation, scenario.params);
  {
    auto out = open_output(out_dir, "walras_path.csv");
    write_csv_row(out, {"s", "x_1_1", "x_1_2", "x_2_1", "x_2_2", "U_1", "U_2"});
    constexpr int kSamples = 100;
    for (int s = 0; s <= kSamples; ++s) {
      const double lambda = static_cast<double>(s) / kSamples;
      const Allocation x = scenario.endowments.with_holdings(
          (1.0 - lambda) * scenario.endowments.holdings() + lambda * walras.allocation.holdings());
      const Vector u = utilities(x, scenario.params);
      write_csv_row(out, {format_double(lambda), format_double(x(0, 0)), format_double(x(1, 0)),
                          format_double(x(0, 1)), format_double(x(1, 1)), format_double(u[0]),
                          format_double(u[1])});
    }
  }

  // Slope of the fair path in utility space, (U_2 - U_2(0)) / (U_1 - U_1(0)).
  // Samples with a negligible gain so far carry only rounding noise.
  double slope_min = std::numeric_limits<double>::infinity();
  double slope_max = -std::numeric_limits<double>::infinity();
  double slope_sum = 0.0;
  int slope_count = 0;
  const double gain_floor = 1e-6 * std::max(0.0, path.utilities.back()[0] - path.utilities.front()[0]);
  for (std::size_t s = 1; s < path.size(); ++s) {
    const Vector du = path.utilities[s] - path.utilities.front();
    if (du[0] <= gain_floor || du[0] <= 1e-12) continue;
    const double slope = du[1] / du[0];
    slope_min = std::min(slope_min, slope);
    slope_max = std::max(slope_max, slope);
    slope_sum += slope;
    ++slope_count;
  }
  const EqualGainsReport eg = equal_gains_check(path);
  const Vector walras_gains = uw - u0;

  json j;
  j["scenario"] = scenario.name;
  j["walras"] = {{"price_ratio", walras.price_ratio},
                 {"allocation", matrix_json(walras.allocation.holdings())},
                 {"utilities", vector_json(uw)},
                 {"utility_gains", vector_json(walras_gains)},
                 {"gain_difference", std::abs(walras_gains[0] - walras_gains[1])},
                 {"trades", (walras.allocation.holdings() - scenario.endowments.holdings()).norm() > 1e-12}};
  j["fair"] = record_json(fair.record);
  j["fair"]["trades"] = fair.record.status != Status::AlreadyOptimal;
  j["fair_path_slope"] = {{"samples", slope_count},
                          {"mean", slope_count ? slope_sum / slope_count : 1.0},
                          {"min", slope_count ? slope_min : 1.0},
                          {"max", slope_count ? slope_max : 1.0}};
  j["equal_gains"] = {{"max_deviation", eg.max_deviation}, {"total_gain", eg.total_gain}, {"passed", eg.passed}};
  j["equilibrium_distance"] = (walras.allocation.holdings() - fair.record.final.holdings()).norm();
  j["utility_distance"] = (uw - fair.record.final_utilities).norm();
  write_json(out_dir, "walras_compare.json", j);

  log << scenario.name << ": Walras price ratio " << format_double(walras.price_ratio) << ", fair "
      << to_string(fair.record.status) << ", equilibrium distance "
      << format_double(j["equilibrium_distance"].get<double>()) << "\n";
  return succeeded(fair.record.status) ? kExitOk : kExitIntegration;
}

int run_scenarios_list(std::ostream& out) {
  for (const BundledScenario& s : list_bundled_scenarios()) {
    out << s.name << "  (n=" << s.agents << ", m=" << s.goods << ")  " << s.description << "\n";
  }
  return kExitOk;
}

}  // namespace edgeworth
