#pragma once

// Independent references for the trade dynamics: closed-form two-agent
// Cobb-Douglas results and a randomized search for Pareto improvements.

#include <cstdint>

#include "edgeworth/economy.hpp"

namespace edgeworth {

struct WalrasResult {
  double price_ratio = 0.0;  // price of good 1, good 2 is the numeraire
  Allocation allocation;
  Allocation path_start;  // the trade path is the straight segment start -> allocation
};

// Cobb-Douglas demand of one agent at arbitrary positive prices.
Vector cobb_douglas_demand(const VectorRef& endowment, const VectorRef& exponents, const VectorRef& prices);

// Competitive equilibrium of the 2-agent, 2-good Cobb-Douglas economy.
WalrasResult walras_two_agent_cd(const Allocation& endowments, const UtilityParams& params);

// Contract-curve point where agent 1 holds `share` of good 1.
Allocation contract_curve_two_agent_cd(const UtilityParams& params, const VectorRef& totals, double share);

struct ParetoSearchReport {
  bool improvement_found = false;
  int samples_drawn = 0;
  int feasible_samples = 0;
  Vector best_gains;  // utility changes of the first improvement found
};

// Draws zero-sum perturbations with Frobenius norm <= radius, uniformly
// distributed in that ball, and looks for one that leaves every agent at
// least as well off (slack 1e-12) and someone strictly better off.
// Perturbations leaving the box are skipped.
ParetoSearchReport brute_force_pareto_check(const Allocation& allocation, const UtilityParams& params,
                                            double radius, int samples, std::uint64_t seed);

}  // namespace edgeworth
