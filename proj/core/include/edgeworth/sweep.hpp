#pragma once

// Sweeps of the network simplex: every grid point p is integrated from the
// same initial allocation, giving a sampled map from networks to the
// equilibria they implement.

#include <optional>
#include <ostream>
#include <vector>

#include "edgeworth/integrate.hpp"
#include "edgeworth/networks.hpp"
#include "edgeworth/scenario.hpp"

namespace edgeworth {

struct AgentSummary {
  double min_utility = 0.0;
  double max_utility = 0.0;
  int argmax_index = 0;  // first grid index attaining max_utility
  int vertex_index = 0;  // grid index of this agent's star
  double vertex_utility = 0.0;
  bool vertex_dominant = false;  // vertex attains the max within 1e-9 relative
};

struct ManifoldDataset {
  int resolution = 0;
  std::vector<SimplexPoint> grid;
  std::vector<EquilibriumRecord> records;
  std::vector<std::optional<Rgb>> colors;  // set for three-agent sweeps only
  std::vector<AgentSummary> agents;
  int non_converged = 0;
  bool vertex_dominance = false;
  // Smallest utility-space distance between two grid points' equilibria.
  double min_pairwise_distance = 0.0;
  // Largest utility-space distance between equilibria of adjacent grid
  // points (compositions differing by one unit moved between two agents).
  double max_adjacent_distance = 0.0;
  // Gain shares at the barycenter when the grid contains it.
  std::optional<Vector> barycenter_gain_shares;

  [[nodiscard]] bool publishable() const { return non_converged == 0; }
};

// Deterministic for any worker count; workers <= 0 uses the hardware
// concurrency. The scenario's own probabilities are ignored.
ManifoldDataset run_sweep(const Scenario& scenario, int resolution, int workers = 0);

struct RefinementRow {
  int resolution = 0;
  double max_adjacent_distance = 0.0;
};

std::vector<RefinementRow> refinement_table(const Scenario& scenario, const std::vector<int>& resolutions,
                                            int workers = 0);

// Columns: index, p_1..p_n, r, g, b, u_1..u_n, gain_1..gain_n,
// mrs_residual, steps, status. Color cells are empty unless n = 3.
void write_manifold_csv(std::ostream& os, const ManifoldDataset& dataset);

}  // namespace edgeworth
