#include "edgeworth/integrate.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "edgeworth/errors.hpp"

namespace edgeworth {

namespace {

constexpr int kMaxBoundaryHalvings = 40;
constexpr int kMaxRejections = 200;
constexpr int kCleanStepsToReset = 10;

// Dormand-Prince 5(4) tableau.
constexpr std::array<std::array<double, 6>, 7> kA = {{
    {0, 0, 0, 0, 0, 0},
    {1.0 / 5, 0, 0, 0, 0, 0},
    {3.0 / 40, 9.0 / 40, 0, 0, 0, 0},
    {44.0 / 45, -56.0 / 15, 32.0 / 9, 0, 0, 0},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729, 0, 0},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656, 0},
    {35.0 / 384, 0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
}};
constexpr std::array<double, 7> kB = {35.0 / 384, 0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84, 0};
constexpr std::array<double, 7> kE = {71.0 / 57600,      0,         -71.0 / 16695, 71.0 / 1920,
                                      -17253.0 / 339200, 22.0 / 525, -1.0 / 40};

Matrix scaled_field(const GradientMatrix& g, const NetworkSpec& network, double time_scale) {
  return time_scale * network_trade_field(g, network.weights).directions;
}

GradientMatrix gradients_of(const Matrix& holdings, const UtilityParams& params, double floor) {
  GradientMatrix g{Matrix(holdings.rows(), holdings.cols())};
  for (Eigen::Index i = 0; i < holdings.cols(); ++i) {
    g.values.col(i) = eval_gradient(holdings.col(i), params.exponents().col(i), floor);
  }
  return g;
}

void require_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw ValidationError(std::string("integrator.") + name + " must be a positive finite number");
  }
}

}  // namespace

void IntegratorConfig::validate() const {
  require_positive(initial_step, "initial_step");
  require_positive(relative_error_target, "relative_error_target");
  require_positive(stop_field_norm, "stop_field_norm");
  require_positive(stop_mrs_dispersion, "stop_mrs_dispersion");
  require_positive(max_time, "max_time");
  require_positive(boundary_floor, "boundary_floor");
  require_positive(time_scale, "time_scale");
  if (max_steps < 1) throw ValidationError("integrator.max_steps must be at least 1");
  if (stride < 1) throw ValidationError("integrator.stride must be at least 1");
}

std::string_view to_string(Status status) {
  switch (status) {
    case Status::Converged: return "Converged";
    case Status::AlreadyOptimal: return "AlreadyOptimal";
    case Status::MaxStepsReached: return "MaxStepsReached";
    case Status::BoundaryApproach: return "BoundaryApproach";
  }
  return "Unknown";
}

Status status_from_string(std::string_view name) {
  for (Status s : {Status::Converged, Status::AlreadyOptimal, Status::MaxStepsReached, Status::BoundaryApproach}) {
    if (to_string(s) == name) return s;
  }
  throw ParseError("unknown status '" + std::string(name) + "'");
}

StepResult step(const Allocation& state, const GradientMatrix& gradients, const UtilityParams& params,
                const NetworkSpec& network, const IntegratorConfig& config, double trial_step) {
  require_compatible(state, params);
  if (network.agents() != state.agents()) throw DimensionError("network and allocation agent counts differ");
  if (!(trial_step > 0.0)) throw IntegrationError("trial step must be positive");

  const Matrix& y = state.holdings();
  const double floor = config.boundary_floor;
  if (y.minCoeff() < floor) throw BoundaryError("state is not above the boundary floor");

  std::array<Matrix, 7> k;
  k[0] = scaled_field(gradients, network, config.time_scale);

  StepResult out;
  out.diagnostics = invariant_report(gradients, TradeField{k[0] / config.time_scale});

  double h = trial_step;
  while (true) {
    bool hit_floor = false;
    Matrix y_new;
    GradientMatrix g_end;
    try {
      for (int s = 1; s < 7; ++s) {
        Matrix stage = y;
        for (int r = 0; r < s; ++r) {
          if (kA[s][r] != 0.0) stage.noalias() += (h * kA[s][r]) * k[r];
        }
        if (stage.minCoeff() < floor) {
          hit_floor = true;
          break;
        }
        GradientMatrix g = gradients_of(stage, params, floor);
        k[s] = scaled_field(g, network, config.time_scale);
        if (s == 6) {
          y_new = std::move(stage);
          g_end = std::move(g);
        }
      }
    } catch (const BoundaryError&) {
      hit_floor = true;
    }

    if (hit_floor) {
      if (++out.boundary_halvings > kMaxBoundaryHalvings) {
        throw BoundaryApproachError("state approaches the boundary of the box; 40 step halvings exhausted");
      }
      h *= 0.5;
      continue;
    }

    Matrix err = Matrix::Zero(y.rows(), y.cols());
    for (int s = 0; s < 7; ++s) {
      if (kE[s] != 0.0) err.noalias() += (h * kE[s]) * k[s];
    }
    const Matrix scale =
        (config.relative_error_target * (y.cwiseAbs().cwiseMax(y_new.cwiseAbs()).array() + floor)).matrix();
    const double err_norm = (err.cwiseAbs().array() / scale.array()).maxCoeff();
    if (!std::isfinite(err_norm)) throw IntegrationError("non-finite error estimate");

    if (err_norm <= 1.0) {
      out.state = state.with_holdings(std::move(y_new));
      out.accepted_step = h;
      const double grow = err_norm == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err_norm, -0.2), 0.2, 5.0);
      out.next_step = h * grow;
      out.end_gradients = std::move(g_end);
      return out;
    }
    if (++out.rejections > kMaxRejections) throw IntegrationError("step-size control failed to converge");
    h *= std::clamp(0.9 * std::pow(err_norm, -0.2), 0.1, 0.9);
    if (h < std::numeric_limits<double>::min()) throw IntegrationError("step size underflow");
  }
}

namespace {

void record_sample(Trajectory& traj, double t, const Allocation& x, const UtilityParams& params,
                   const InvariantReport& diag) {
  traj.times.push_back(t);
  traj.states.push_back(x);
  Vector u = utilities(x, params);
  traj.potentials.push_back(u.sum());
  traj.utilities.push_back(std::move(u));
  traj.diagnostics.push_back(diag);
}

}  // namespace

IntegrationResult integrate_to_equilibrium(const Allocation& initial, const UtilityParams& params,
                                           const NetworkSpec& network, const IntegratorConfig& config) {
  config.validate();
  require_compatible(initial, params);
  if (network.agents() != initial.agents()) throw DimensionError("network and allocation agent counts differ");
  if (!(initial.min_holding() > config.boundary_floor)) {
    throw BoundaryError("initial allocation is not strictly interior");
  }

  IntegrationResult result;
  Trajectory& traj = result.trajectory;
  EquilibriumRecord& rec = result.record;
  rec.network = network;
  rec.initial = initial;
  rec.initial_utilities = utilities(initial, params);

  Allocation x = initial;
  GradientMatrix g = gradient_matrix(x, params, config.boundary_floor);
  TradeField field = network_trade_field(g, network.weights);
  InvariantReport diag = invariant_report(g, field);
  double t = 0.0;
  double h = config.initial_step;
  std::int64_t steps = 0;
  record_sample(traj, t, x, params, diag);

  auto converged = [&](const GradientMatrix& grads, const TradeField& f) {
    return f.norm() < config.stop_field_norm || mrs_dispersion(grads) < config.stop_mrs_dispersion;
  };

  Status status = Status::MaxStepsReached;
  if (converged(g, field)) {
    status = Status::AlreadyOptimal;
  } else {
    bool last_recorded = true;
    // Halvings accumulate over consecutive steps that brush the floor, so a
    // path creeping into the boundary stops instead of shrinking forever.
    int boundary_streak = 0;
    int clean_steps = 0;
    while (true) {
      if (steps >= config.max_steps || t >= config.max_time) {
        status = Status::MaxStepsReached;
        rec.message = steps >= config.max_steps ? "step cap reached" : "time cap reached";
        break;
      }
      StepResult sr;
      try {
        sr = step(x, g, params, network, config, h);
      } catch (const BoundaryApproachError& e) {
        status = Status::BoundaryApproach;
        rec.message = e.what();
        break;
      }
      if (sr.boundary_halvings > 0) {
        boundary_streak += sr.boundary_halvings;
        clean_steps = 0;
      } else if (++clean_steps >= kCleanStepsToReset) {
        boundary_streak = 0;
      }
      if (boundary_streak > kMaxBoundaryHalvings) {
        status = Status::BoundaryApproach;
        rec.message = "state approaches the boundary of the box; 40 step halvings exhausted";
        break;
      }
      ++steps;
      t += sr.accepted_step;
      h = sr.next_step;
      x = std::move(sr.state);
      g = std::move(sr.end_gradients);
      field = network_trade_field(g, network.weights);
      diag = invariant_report(g, field);
      const bool done = converged(g, field);
      last_recorded = done || steps % config.stride == 0;
      if (last_recorded) record_sample(traj, t, x, params, diag);
      if (done) {
        status = Status::Converged;
        break;
      }
    }
    if (!last_recorded) record_sample(traj, t, x, params, diag);
  }

  rec.final = x;
  rec.final_utilities = utilities(x, params);
  rec.utility_gains = rec.final_utilities - rec.initial_utilities;
  rec.mrs_residual = mrs_dispersion(g);
  rec.field_norm = field.norm();
  rec.steps = steps;
  rec.elapsed_time = t;
  rec.status = status;
  return result;
}

EqualGainsReport equal_gains_check(const Trajectory& trajectory, double relative_tolerance) {
  if (trajectory.size() == 0) throw DimensionError("empty trajectory");
  if (trajectory.utilities.front().size() != 2) {
    throw DimensionError("equal gains check applies to two-agent trajectories");
  }
  EqualGainsReport r;
  const Vector& u0 = trajectory.utilities.front();
  for (const Vector& u : trajectory.utilities) {
    const Vector d = u - u0;
    r.max_deviation = std::max(r.max_deviation, std::abs(d[0] - d[1]));
  }
  const Vector last = trajectory.utilities.back() - u0;
  r.total_gain = last[0] + last[1];
  r.passed = r.max_deviation <= relative_tolerance * r.total_gain || r.max_deviation == 0.0;
  return r;
}

TrajectoryReport check_trajectory(const Trajectory& trajectory) {
  TrajectoryReport r;
  if (trajectory.size() == 0) return r;
  const Vector& totals = trajectory.states.front().totals();
  for (std::size_t s = 0; s < trajectory.size(); ++s) {
    const Allocation& x = trajectory.states[s];
    const Vector sums = x.holdings().rowwise().sum();
    for (Eigen::Index k = 0; k < sums.size(); ++k) {
      r.max_conservation_drift = std::max(r.max_conservation_drift, std::abs(sums[k] - totals[k]) / totals[k]);
    }
    if (!feasibility_check(x).feasible) r.all_feasible = false;
    r.max_zero_sum_residual = std::max(r.max_zero_sum_residual, trajectory.diagnostics[s].zero_sum_residual);
    r.min_utility_rate = std::min(r.min_utility_rate, trajectory.diagnostics[s].min_utility_rate);
    if (s > 0) {
      r.min_potential_increment =
          std::min(r.min_potential_increment, trajectory.potentials[s] - trajectory.potentials[s - 1]);
      r.min_utility_increment = std::min(
          r.min_utility_increment, (trajectory.utilities[s] - trajectory.utilities[s - 1]).minCoeff());
    }
  }
  r.conservation_ok = r.max_conservation_drift <= kConservationTolerance;
  r.potential_ok = r.min_potential_increment >= -1e-10;
  r.utilities_ok = r.min_utility_increment >= -1e-8;
  return r;
}

}  // namespace edgeworth
