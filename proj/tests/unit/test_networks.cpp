#include <cmath>
#include <random>
#include <set>

#include <doctest.h>

#include "edgeworth/errors.hpp"
#include "edgeworth/networks.hpp"

using namespace edgeworth;

namespace {

double total_edge_weight(const NetworkSpec& net) {
  double s = 0.0;
  for (int i = 0; i < net.agents(); ++i) {
    for (int j = i + 1; j < net.agents(); ++j) s += net.weights(i, j);
  }
  return s;
}

}  // namespace

TEST_CASE("weights_from_probabilities examples") {
  const NetworkSpec s = weights_from_probabilities(std::vector<double>{1, 0, 0});
  CHECK(s.weights(0, 1) == 0.5);
  CHECK(s.weights(0, 2) == 0.5);
  CHECK(s.weights(1, 2) == 0.0);

  const double t = 1.0 / 3.0;
  const NetworkSpec c = weights_from_probabilities(std::vector<double>{t, t, t});
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) CHECK(c.weights(i, j) == doctest::Approx(i == j ? 0.0 : t).epsilon(1e-15));
  }

  const NetworkSpec h = weights_from_probabilities(std::vector<double>{0.5, 0.5, 0});
  CHECK(h.weights(0, 1) == 0.5);
  CHECK(h.weights(0, 2) == 0.25);
  CHECK(h.weights(1, 2) == 0.25);
}

TEST_CASE("malformed probabilities are rejected") {
  CHECK_THROWS_AS(weights_from_probabilities(std::vector<double>{0.5, 0.4}), ProbabilityError);
  CHECK_THROWS_AS(weights_from_probabilities(std::vector<double>{1.5, -0.5}), ProbabilityError);
  CHECK_THROWS_AS(weights_from_probabilities(std::vector<double>{1.0}), ProbabilityError);
}

TEST_CASE("star") {
  CHECK(star(0, 3) == Vector::Unit(3, 0));
  CHECK(star(2, 3) == Vector::Unit(3, 2));
  CHECK_THROWS_AS(star(3, 3), IndexError);
  CHECK_THROWS_AS(star(-1, 3), IndexError);

  const NetworkSpec s = weights_from_probabilities(star(1, 4));
  CHECK(s.weights(0, 2) == 0.0);
  CHECK(s.weights(0, 3) == 0.0);
  CHECK(s.weights(2, 3) == 0.0);
  CHECK(s.weights(1, 0) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("network properties on random probability vectors") {
  std::mt19937_64 rng(3);
  std::exponential_distribution<double> e(1.0);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 2 + trial % 6;
    Vector p(n);
    for (int i = 0; i < n; ++i) p[i] = (trial % 5 == 0 && i > 0) ? 0.0 : e(rng);
    p /= p.sum();
    const NetworkSpec net = weights_from_probabilities(p);
    CHECK(std::abs(total_edge_weight(net) - 1.0) <= 1e-12);
    for (int i = 0; i < n; ++i) {
      CHECK(net.weights(i, i) == 0.0);
      bool connected = false;
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        CHECK(net.weights(i, j) == net.weights(j, i));
        CHECK(std::abs(net.weights(i, j) - (p[i] + p[j]) / (n - 1)) <= 1e-15);
        if (net.weights(i, j) > 0.0) connected = true;
      }
      CHECK(connected);
    }
  }
}

TEST_CASE("simplex_grid counts and order") {
  CHECK(simplex_grid(3, 1).size() == 3);
  CHECK(simplex_grid(3, 2).size() == 6);
  CHECK(simplex_grid(2, 4).size() == 5);
  CHECK(simplex_grid(3, 12).size() == 91);
  CHECK(simplex_grid_size(3, 12) == 91);
  CHECK(simplex_grid_size(4, 10) == 286);
  CHECK_THROWS_AS(simplex_grid(3, 0), RangeError);

  const auto g = simplex_grid(3, 2);
  const std::vector<std::vector<int>> expected = {{2, 0, 0}, {1, 1, 0}, {1, 0, 1}, {0, 2, 0}, {0, 1, 1}, {0, 0, 2}};
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(g[i].composition == expected[i]);

  for (int n = 2; n <= 5; ++n) {
    for (int r = 1; r <= 7; ++r) {
      const auto pts = simplex_grid(n, r);
      CHECK(pts.size() == simplex_grid_size(n, r));
      std::set<std::vector<int>> seen;
      for (const auto& pt : pts) {
        CHECK_NOTHROW(validate_probabilities(pt.probabilities));
        seen.insert(pt.composition);
      }
      CHECK(seen.size() == pts.size());
    }
  }
}

TEST_CASE("barycentric_color") {
  CHECK(barycentric_color(Vector::Unit(3, 0)) == Rgb{255, 0, 0});
  CHECK(barycentric_color(Vector::Unit(3, 1)) == Rgb{0, 0, 255});
  CHECK(barycentric_color(Vector::Unit(3, 2)) == Rgb{0, 255, 0});
  CHECK(barycentric_color(Vector::Constant(3, 1.0 / 3.0)) == Rgb{85, 85, 85});
  CHECK_THROWS_AS(barycentric_color(Vector::Constant(2, 0.5)), DimensionError);
}
