#pragma once

// Fair-trade directions. In a bilateral meeting each agent moves along the
// rejection of its own gradient from the sum of both gradients, which splits
// the instantaneous utility gain equally. On a network the agent's trade is
// the weighted sum of its bilateral trades.

#include <vector>

#include "edgeworth/economy.hpp"

namespace edgeworth {

// Gradient pairs closer than this angle (radians) are treated as
// proportional: no trade.
inline constexpr double kDependenceAngle = 1e-8;

// Singular values below this fraction of the largest are treated as zero.
inline constexpr double kNullspaceCutoff = 1e-10;

struct TradeField {
  Matrix directions;  // m x n, column i is f_i

  [[nodiscard]] int goods() const { return static_cast<int>(directions.rows()); }
  [[nodiscard]] int agents() const { return static_cast<int>(directions.cols()); }
  [[nodiscard]] double norm() const { return directions.norm(); }
};

// Angle between two vectors, accurate near zero and pi.
double angle_between(const VectorRef& a, const VectorRef& b);

// f_i = mu_i - [mu_i . s / |s|^2] s with s = mu_i + mu_j. Zero when the
// gradients are within kDependenceAngle of each other.
Vector pairwise_fair_direction(const VectorRef& mu_i, const VectorRef& mu_j);

// The two bilateral directions cancel exactly.
bool pairwise_additive_inverse_check(const VectorRef& mu_i, const VectorRef& mu_j);

// Throws NetworkError unless weights are n x n, symmetric, nonnegative,
// with zero diagonal.
void validate_weights(const Matrix& weights, int agents);

// f_i = sum_j w_ij * pairwise_fair_direction(mu_i, mu_j). Each pair's
// contribution is added to i and subtracted from j, so the field sums to
// zero up to rounding.
TradeField network_trade_field(const GradientMatrix& gradients, const Matrix& weights);

// Joint fair trade (f_1..f_n) with (mu_i + mu_j) . f_i = 0 for every ordered
// pair and sum_i f_i = 0, solved without a network.
struct MultilateralSolution {
  int nullspace_dimension = 0;
  // Orthonormal basis of the solution space, each element an m x n profile.
  std::vector<Matrix> basis;
  bool trade_exists = false;
  // Per agent: orthonormal basis (m x d_i) of the directions orthogonal to
  // every mu_i + mu_j, ignoring the zero-sum coupling.
  std::vector<Matrix> agent_constraint_spaces;
  // Largest violation of the constraints over all basis elements.
  double max_constraint_residual = 0.0;
};

MultilateralSolution multilateral_fair_solver(const GradientMatrix& gradients);

struct InvariantReport {
  double zero_sum_residual = 0.0;    // max_k |sum_i f_ik|
  Vector utility_rates;              // mu_i . f_i
  double min_utility_rate = 0.0;
  bool positive_gradient_ok = true;  // every rate >= -1e-12
  bool independent_pair = false;     // some pair at angle > kDependenceAngle
  bool field_nonzero = false;
  bool trade_ok = true;              // !independent_pair || field_nonzero
};

InvariantReport invariant_report(const GradientMatrix& gradients, const TradeField& field);

}  // namespace edgeworth
