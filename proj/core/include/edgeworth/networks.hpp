#pragma once

// Probability-induced trade networks: agent i is picked with probability
// p_i and matched uniformly with one of the other n-1 agents, so the couple
// (i,j) trades with weight (p_i + p_j) / (n - 1).

#include <array>
#include <cstdint>
#include <vector>

#include "edgeworth/economy.hpp"

namespace edgeworth {

inline constexpr double kProbabilityTolerance = 1e-12;

struct NetworkSpec {
  Vector probabilities;
  Matrix weights;  // symmetric, zero diagonal

  [[nodiscard]] int agents() const { return static_cast<int>(probabilities.size()); }
};

// Throws ProbabilityError unless p is a probability vector of length >= 2.
void validate_probabilities(const VectorRef& p);

NetworkSpec weights_from_probabilities(const VectorRef& p);
NetworkSpec weights_from_probabilities(const std::vector<double>& p);

// Unit vector at `center`: the star with `center` as its hub.
Vector star(int center, int n);

// One grid point of the simplex: integer composition k with sum r, plus the
// probabilities k / r.
struct SimplexPoint {
  std::vector<int> composition;
  Vector probabilities;
};

// All compositions of `resolution` into n nonnegative parts, in
// lexicographic order of the composition (descending first coordinate).
// Count is C(r + n - 1, n - 1).
std::vector<SimplexPoint> simplex_grid(int n, int resolution);

// Number of grid points, C(r + n - 1, n - 1).
std::uint64_t simplex_grid_size(int n, int resolution);

struct Rgb {
  int red = 0;
  int green = 0;
  int blue = 0;

  friend bool operator==(const Rgb&, const Rgb&) = default;
};

// Three-agent color map: agent 1 -> red, agent 2 -> blue, agent 3 -> green,
// each channel proportional to the agent's probability.
Rgb barycentric_color(const VectorRef& p);

}  // namespace edgeworth
