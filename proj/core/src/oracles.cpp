#include "edgeworth/oracles.hpp"

#include <cmath>
#include <numbers>

#include "edgeworth/errors.hpp"

namespace edgeworth {

namespace {

void require_two_by_two(const Allocation& x, const UtilityParams& params) {
  require_compatible(x, params);
  if (x.goods() != 2 || x.agents() != 2) throw DimensionError("two-agent, two-good economy required");
}

// Counter-based generator: the i-th draw depends only on (seed, i).
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : key_(seed) {}

  std::uint64_t next() { return mix(key_ + 0x9E3779B97F4A7C15ULL * ++counter_); }

  // Uniform in (0, 1).
  double uniform() { return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53; }

  double normal() {
    const double u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace

Vector cobb_douglas_demand(const VectorRef& endowment, const VectorRef& exponents, const VectorRef& prices) {
  if (endowment.size() != exponents.size() || endowment.size() != prices.size()) {
    throw DimensionError("demand inputs have different lengths");
  }
  if (!(prices.array() > 0.0).all()) throw RangeError("prices must be strictly positive");
  const double wealth = prices.dot(endowment);
  return (exponents.array() * wealth / prices.array()).matrix();
}

WalrasResult walras_two_agent_cd(const Allocation& endowments, const UtilityParams& params) {
  require_two_by_two(endowments, params);
  if (!(endowments.min_holding() > 0.0)) throw BoundaryError("Walras oracle needs strictly positive endowments");
  const Matrix& w = endowments.holdings();
  const Matrix& a = params.exponents();
  double num = 0.0;
  double den = 0.0;
  for (int i = 0; i < 2; ++i) {
    num += a(0, i) * w(1, i);
    den += a(1, i) * w(0, i);
  }
  WalrasResult r;
  r.price_ratio = num / den;
  Matrix x(2, 2);
  for (int i = 0; i < 2; ++i) {
    const double wealth = r.price_ratio * w(0, i) + w(1, i);
    x(0, i) = a(0, i) * wealth / r.price_ratio;
    x(1, i) = a(1, i) * wealth;
  }
  r.allocation = endowments.with_holdings(std::move(x));
  r.path_start = endowments;
  return r;
}

Allocation contract_curve_two_agent_cd(const UtilityParams& params, const VectorRef& totals, double share) {
  if (params.goods() != 2 || params.agents() != 2 || totals.size() != 2) {
    throw DimensionError("two-agent, two-good economy required");
  }
  if (!(share > 0.0 && share < 1.0)) throw RangeError("contract curve share must lie in (0,1)");
  const double a1 = params.exponents()(0, 0);
  const double a2 = params.exponents()(0, 1);
  const double x11 = share * totals[0];
  const double x21 = totals[0] - x11;
  // MRS_1 = a1 x12 / ((1-a1) x11) equals MRS_2 = a2 x22 / ((1-a2) x21).
  const double c1 = a1 / ((1.0 - a1) * x11);
  const double c2 = a2 / ((1.0 - a2) * x21);
  const double x12 = c2 * totals[1] / (c1 + c2);
  Matrix x(2, 2);
  x << x11, x21, x12, totals[1] - x12;
  return Allocation(std::move(x), totals);
}

ParetoSearchReport brute_force_pareto_check(const Allocation& allocation, const UtilityParams& params,
                                            double radius, int samples, std::uint64_t seed) {
  require_compatible(allocation, params);
  constexpr double kSlack = 1e-12;
  ParetoSearchReport report;
  if (radius <= 0.0 || samples <= 0) return report;

  const Matrix& x = allocation.holdings();
  const Vector u0 = utilities(allocation, params);
  const int dim = (allocation.agents() - 1) * allocation.goods();
  CounterRng rng(seed);

  for (int s = 0; s < samples; ++s) {
    ++report.samples_drawn;
    Matrix d(x.rows(), x.cols());
    for (Eigen::Index i = 0; i < d.size(); ++i) d.data()[i] = rng.normal();
    d.colwise() -= d.rowwise().mean();
    const double norm = d.norm();
    if (norm == 0.0) continue;
    d *= radius * std::pow(rng.uniform(), 1.0 / dim) / norm;

    const Matrix y = x + d;
    if (y.minCoeff() < 0.0) continue;
    ++report.feasible_samples;
    bool all_weakly_better = true;
    bool some_strictly_better = false;
    Vector gains(x.cols());
    for (Eigen::Index i = 0; i < x.cols(); ++i) {
      gains[i] = eval_utility(y.col(i), params.exponents().col(i)) - u0[i];
      if (gains[i] < -kSlack) {
        all_weakly_better = false;
        break;
      }
      if (gains[i] > kSlack) some_strictly_better = true;
    }
    if (all_weakly_better && some_strictly_better) {
      report.improvement_found = true;
      report.best_gains = gains;
      return report;
    }
  }
  return report;
}

}  // namespace edgeworth
