#include "edgeworth/networks.hpp"

#include <cmath>
#include <functional>
#include <string>

#include "edgeworth/errors.hpp"

namespace edgeworth {

void validate_probabilities(const VectorRef& p) {
  if (p.size() < 2) throw ProbabilityError("a network needs at least two agents");
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (!std::isfinite(p[i]) || p[i] < 0.0) {
      throw ProbabilityError("probability p[" + std::to_string(i) + "] = " + std::to_string(p[i]) +
                             " is not a nonnegative number");
    }
  }
  const double s = p.sum();
  if (std::abs(s - 1.0) > kProbabilityTolerance) {
    throw ProbabilityError("probabilities sum to " + std::to_string(s) + ", expected 1");
  }
}

NetworkSpec weights_from_probabilities(const VectorRef& p) {
  validate_probabilities(p);
  const auto n = p.size();
  NetworkSpec net{p, Matrix::Zero(n, n)};
  const double denom = static_cast<double>(n - 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double w = (p[i] + p[j]) / denom;
      net.weights(i, j) = w;
      net.weights(j, i) = w;
    }
  }
  return net;
}

NetworkSpec weights_from_probabilities(const std::vector<double>& p) {
  return weights_from_probabilities(Eigen::Map<const Vector>(p.data(), static_cast<Eigen::Index>(p.size())));
}

Vector star(int center, int n) {
  if (n < 2) throw ProbabilityError("a star needs at least two agents");
  if (center < 0 || center >= n) {
    throw IndexError("star center " + std::to_string(center) + " out of range for " + std::to_string(n) +
                     " agents");
  }
  Vector p = Vector::Zero(n);
  p[center] = 1.0;
  return p;
}

std::uint64_t simplex_grid_size(int n, int resolution) {
  if (n < 1 || resolution < 0) return 0;
  // C(r + n - 1, n - 1), built incrementally to stay exact.
  std::uint64_t c = 1;
  for (int k = 1; k <= n - 1; ++k) {
    c = c * static_cast<std::uint64_t>(resolution + k) / static_cast<std::uint64_t>(k);
  }
  return c;
}

std::vector<SimplexPoint> simplex_grid(int n, int resolution) {
  if (n < 1) throw DimensionError("simplex grid needs at least one coordinate");
  if (resolution < 1) throw RangeError("simplex grid resolution must be at least 1");
  std::vector<SimplexPoint> points;
  points.reserve(simplex_grid_size(n, resolution));
  std::vector<int> k(static_cast<std::size_t>(n), 0);
  const double r = static_cast<double>(resolution);

  std::function<void(int, int)> fill = [&](int coord, int remaining) {
    if (coord == n - 1) {
      k[coord] = remaining;
      SimplexPoint pt{k, Vector(n)};
      for (int i = 0; i < n; ++i) pt.probabilities[i] = k[i] / r;
      points.push_back(std::move(pt));
      return;
    }
    for (int v = remaining; v >= 0; --v) {
      k[coord] = v;
      fill(coord + 1, remaining - v);
    }
  };
  fill(0, resolution);
  return points;
}

Rgb barycentric_color(const VectorRef& p) {
  if (p.size() != 3) throw DimensionError("barycentric color needs a 3-agent probability vector");
  validate_probabilities(p);
  auto channel = [](double v) { return static_cast<int>(std::lround(255.0 * v)); };
  return Rgb{channel(p[0]), channel(p[2]), channel(p[1])};
}

}  // namespace edgeworth
