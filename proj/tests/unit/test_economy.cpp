#include <cmath>
#include <random>

#include <doctest.h>

#include "edgeworth/economy.hpp"
#include "edgeworth/errors.hpp"

using namespace edgeworth;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

// Random exponent vector in the open simplex.
Vector random_exponents(std::mt19937_64& rng, int m) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  Vector a(m);
  for (int k = 0; k < m; ++k) a[k] = u(rng);
  a /= a.sum();
  return a;
}

}  // namespace

TEST_CASE("eval_utility examples") {
  CHECK(eval_utility(vec({1, 1}), vec({0.5, 0.5})) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(eval_utility(vec({4, 1}), vec({0.5, 0.5})) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(eval_utility(vec({0, 5}), vec({0.5, 0.5})) == 0.0);
  CHECK_THROWS_AS(eval_utility(vec({1, 1, 1}), vec({0.5, 0.5})), DimensionError);
}

TEST_CASE("eval_gradient examples") {
  const Vector g1 = eval_gradient(vec({1, 1}), vec({0.5, 0.5}));
  CHECK(g1[0] == doctest::Approx(0.5));
  CHECK(g1[1] == doctest::Approx(0.5));

  const Vector g2 = eval_gradient(vec({4, 1}), vec({0.5, 0.5}));
  CHECK(g2[0] == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(g2[1] == doctest::Approx(1.0).epsilon(1e-14));

  const double third = 1.0 / 3.0;
  const Vector g3 = eval_gradient(vec({1, 1, 1}), vec({third, third, third}));
  for (int k = 0; k < 3; ++k) CHECK(g3[k] == doctest::Approx(third).epsilon(1e-14));
}

TEST_CASE("eval_gradient refuses holdings below the boundary floor") {
  CHECK_THROWS_AS(eval_gradient(vec({1e-10, 1}), vec({0.5, 0.5})), BoundaryError);
  CHECK_THROWS_AS(eval_gradient(vec({0, 1}), vec({0.5, 0.5})), BoundaryError);
  CHECK_NOTHROW(eval_gradient(vec({2e-9, 1}), vec({0.5, 0.5})));
  CHECK_THROWS_AS(eval_gradient(vec({1, 1}), vec({0.5, 0.25, 0.25})), DimensionError);
}

TEST_CASE("utility is homogeneous of degree one and satisfies the Euler identity") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> pos(0.1, 10.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int m = 2 + trial % 4;
    const Vector a = random_exponents(rng, m);
    Vector x(m);
    for (int k = 0; k < m; ++k) x[k] = pos(rng);
    const double c = pos(rng);
    const double u = eval_utility(x, a);
    CHECK(eval_utility(c * x, a) == doctest::Approx(c * u).epsilon(1e-12));
    CHECK(x.dot(eval_gradient(x, a)) == doctest::Approx(u).epsilon(1e-10));
  }
}

TEST_CASE("gradient matches central finite differences") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> pos(0.5, 5.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int m = 2 + trial % 3;
    const Vector a = random_exponents(rng, m);
    Vector x(m);
    for (int k = 0; k < m; ++k) x[k] = pos(rng);
    const Vector g = eval_gradient(x, a);
    for (int k = 0; k < m; ++k) {
      const double h = 1e-5 * x[k];
      Vector xp = x, xm = x;
      xp[k] += h;
      xm[k] -= h;
      const double fd = (eval_utility(xp, a) - eval_utility(xm, a)) / (2 * h);
      CHECK(std::abs(fd - g[k]) <= 1e-6 * std::abs(g[k]));
    }
  }
}

TEST_CASE("mrs_dispersion examples") {
  const UtilityParams two = UtilityParams::two_good({0.5, 0.5});
  CHECK(mrs_dispersion(Allocation::from_bundles({{2, 2}, {2, 2}}), two) == 0.0);

  // Gradients (~0.707, ~0.354) and (~0.354, ~0.707) are not proportional.
  const double off = mrs_dispersion(Allocation::from_bundles({{1, 2}, {2, 1}}), two);
  CHECK(off > 0.0);
  // 1 - cos = 1 - 0.8 for the directions (2,1) and (1,2).
  CHECK(off == doctest::Approx(0.2).epsilon(1e-12));

  const UtilityParams three = UtilityParams::two_good({0.3, 0.3, 0.3});
  CHECK(mrs_dispersion(Allocation::from_bundles({{1, 1}, {2, 2}, {0.5, 0.5}}), three) ==
        doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("mrs_dispersion vanishes iff gradients are pairwise proportional") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> pos(0.2, 4.0);
  for (int trial = 0; trial < 100; ++trial) {
    const int m = 2 + trial % 3;
    const int n = 2 + trial % 3;
    Matrix g(m, n);
    Vector base(m);
    for (int k = 0; k < m; ++k) base[k] = pos(rng);
    for (int i = 0; i < n; ++i) g.col(i) = pos(rng) * base;
    CHECK(mrs_dispersion(GradientMatrix{g}) <= 1e-15);

    // Tilt one agent's gradient off the common ray.
    g(0, n - 1) *= 1.01;
    CHECK(mrs_dispersion(GradientMatrix{g}) > 1e-8);
  }
}

TEST_CASE("potential examples") {
  const UtilityParams half = UtilityParams::two_good({0.5, 0.5});
  CHECK(potential(Allocation::from_bundles({{1, 1}, {1, 1}}), half) == doctest::Approx(2.0));
  CHECK(potential(Allocation::from_bundles({{3, 1}, {1, 3}}), half) ==
        doctest::Approx(2.0 * std::sqrt(3.0)).epsilon(1e-14));
}

TEST_CASE("feasibility_check reports violations") {
  const Allocation ok = Allocation::from_bundles({{1, 2}, {3, 4}});
  CHECK(feasibility_check(ok).feasible);

  Matrix neg(2, 2);
  neg << -0.001, 1.001, 1.0, 1.0;
  const auto r1 = feasibility_check(Allocation(neg, Vector::Constant(2, 1.0).cwiseProduct(vec({1.0, 2.0}))));
  CHECK_FALSE(r1.feasible);
  REQUIRE(r1.negative_entries.size() == 1);
  CHECK(r1.negative_entries[0].good == 0);
  CHECK(r1.negative_entries[0].agent == 0);
  CHECK(r1.negative_entries[0].value == doctest::Approx(-0.001));

  Matrix drift(2, 2);
  drift << 1.0005, 1.0005, 1.0, 1.0;
  const auto r2 = feasibility_check(Allocation(drift, vec({2.0, 2.0})));
  CHECK_FALSE(r2.feasible);
  REQUIRE(r2.totals_violations.size() == 1);
  CHECK(r2.totals_violations[0].good == 0);
  CHECK(r2.totals_violations[0].relative_residual == doctest::Approx(5e-4).epsilon(1e-9));
  CHECK(r2.describe().find("good 0") != std::string::npos);
}

TEST_CASE("utility params validation") {
  CHECK_THROWS_AS(UtilityParams::two_good({1.0}), ValidationError);
  CHECK_THROWS_AS(UtilityParams::from_agents({{0.5, 0.6}}), ValidationError);
  CHECK_THROWS_AS(UtilityParams::from_agents({{0.5, 0.5}, {0.2, 0.3, 0.5}}), DimensionError);
  CHECK_NOTHROW(UtilityParams::from_agents({{0.2, 0.3, 0.5}}));
}
