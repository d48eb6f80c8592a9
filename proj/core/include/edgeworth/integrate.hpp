#pragma once

// Time integration of dX/dt = speed * network_trade_field(X) from an
// interior allocation to a point of the contract curve.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "edgeworth/dynamics.hpp"
#include "edgeworth/economy.hpp"
#include "edgeworth/networks.hpp"

namespace edgeworth {

struct IntegratorConfig {
  double initial_step = 1e-2;
  double relative_error_target = 1e-10;
  double stop_field_norm = 1e-8;
  double stop_mrs_dispersion = 1e-12;
  double max_time = 1e6;
  std::int64_t max_steps = 2'000'000;
  double boundary_floor = kDefaultBoundaryFloor;
  double time_scale = 1.0;
  // Keep every stride-th accepted step in the trajectory; endpoints are
  // always kept.
  int stride = 1;

  // Throws ValidationError naming the offending field.
  void validate() const;
};

enum class Status { Converged, AlreadyOptimal, MaxStepsReached, BoundaryApproach };

std::string_view to_string(Status status);
Status status_from_string(std::string_view name);

struct StepResult {
  Allocation state;
  double accepted_step = 0.0;
  double next_step = 0.0;     // controller proposal for the following step
  int boundary_halvings = 0;
  int rejections = 0;
  GradientMatrix end_gradients;  // gradients at `state`
  InvariantReport diagnostics;   // at the starting state
};

// One adaptive Dormand-Prince 5(4) step of size at most `trial_step`.
// Throws BoundaryApproachError after 40 consecutive floor violations and
// IntegrationError if step-size control breaks down.
StepResult step(const Allocation& state, const GradientMatrix& gradients, const UtilityParams& params,
                const NetworkSpec& network, const IntegratorConfig& config, double trial_step);

struct Trajectory {
  std::vector<double> times;
  std::vector<Allocation> states;
  std::vector<Vector> utilities;
  std::vector<double> potentials;
  std::vector<InvariantReport> diagnostics;

  [[nodiscard]] std::size_t size() const { return times.size(); }
};

struct EquilibriumRecord {
  NetworkSpec network;
  Allocation initial;
  Allocation final;
  Vector initial_utilities;
  Vector final_utilities;
  Vector utility_gains;
  double mrs_residual = 0.0;
  double field_norm = 0.0;
  std::int64_t steps = 0;
  double elapsed_time = 0.0;
  Status status = Status::MaxStepsReached;
  std::string message;
};

struct IntegrationResult {
  Trajectory trajectory;
  EquilibriumRecord record;
};

// Throws BoundaryError if the start is not strictly above the boundary
// floor. Running into the floor later ends the run with BoundaryApproach.
IntegrationResult integrate_to_equilibrium(const Allocation& initial, const UtilityParams& params,
                                           const NetworkSpec& network, const IntegratorConfig& config);

// Two-agent fair paths gain equally: |dU_1 - dU_2| stays at zero.
struct EqualGainsReport {
  double max_deviation = 0.0;
  double total_gain = 0.0;
  bool passed = false;
};

EqualGainsReport equal_gains_check(const Trajectory& trajectory, double relative_tolerance = 1e-6);

// Invariants over recorded samples of a trajectory.
struct TrajectoryReport {
  double max_conservation_drift = 0.0;   // relative, against the first state
  double min_potential_increment = 0.0;  // most negative step-to-step change
  double min_utility_increment = 0.0;    // over all agents
  double max_zero_sum_residual = 0.0;
  double min_utility_rate = 0.0;
  bool all_feasible = true;
  bool conservation_ok = true;  // drift <= 1e-9
  bool potential_ok = true;     // increments >= -1e-10
  bool utilities_ok = true;     // increments >= -1e-8
};

TrajectoryReport check_trajectory(const Trajectory& trajectory);

}  // namespace edgeworth
