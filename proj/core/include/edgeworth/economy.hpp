#pragma once

// Pure-exchange economy: allocations over the multidimensional Edgeworth
// box, Cobb-Douglas utilities and their gradients, and contract-curve
// residuals.

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace edgeworth {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using VectorRef = Eigen::Ref<const Eigen::VectorXd>;

inline constexpr double kConservationTolerance = 1e-9;
inline constexpr double kDefaultBoundaryFloor = 1e-9;
inline constexpr double kExponentSumTolerance = 1e-12;

// m x n matrix of holdings (rows = goods, columns = agents) together with
// the resource point, i.e. the per-good totals the holdings must sum to.
// Construction only checks shapes; membership of the box is reported by
// feasibility_check() so that infeasible states can be inspected.
class Allocation {
 public:
  Allocation() = default;
  explicit Allocation(Matrix holdings);
  Allocation(Matrix holdings, Vector totals);

  // One bundle per agent, each of length m.
  static Allocation from_bundles(const std::vector<std::vector<double>>& bundles);

  [[nodiscard]] int goods() const { return static_cast<int>(holdings_.rows()); }
  [[nodiscard]] int agents() const { return static_cast<int>(holdings_.cols()); }
  [[nodiscard]] const Matrix& holdings() const { return holdings_; }
  [[nodiscard]] const Vector& totals() const { return totals_; }
  [[nodiscard]] Vector bundle(int agent) const { return holdings_.col(agent); }
  [[nodiscard]] double operator()(int good, int agent) const { return holdings_(good, agent); }

  // Smallest holding over all goods and agents.
  [[nodiscard]] double min_holding() const { return holdings_.minCoeff(); }

  // Same resource point, new holdings.
  [[nodiscard]] Allocation with_holdings(Matrix holdings) const;

 private:
  Matrix holdings_;
  Vector totals_;
};

// Cobb-Douglas exponents, one column per agent. Every exponent lies in (0,1)
// and each column sums to one (constant returns to scale).
class UtilityParams {
 public:
  UtilityParams() = default;
  explicit UtilityParams(Matrix exponents);

  // Two-good shorthand: agent i gets (alpha_i, 1 - alpha_i).
  static UtilityParams two_good(const std::vector<double>& alphas);
  static UtilityParams from_agents(const std::vector<std::vector<double>>& exponents);

  [[nodiscard]] int goods() const { return static_cast<int>(exponents_.rows()); }
  [[nodiscard]] int agents() const { return static_cast<int>(exponents_.cols()); }
  [[nodiscard]] const Matrix& exponents() const { return exponents_; }
  [[nodiscard]] Vector agent(int i) const { return exponents_.col(i); }

 private:
  Matrix exponents_;
};

// Marginal utilities mu_ik, one column per agent. Strictly positive in the
// interior of the box.
struct GradientMatrix {
  Matrix values;

  [[nodiscard]] int goods() const { return static_cast<int>(values.rows()); }
  [[nodiscard]] int agents() const { return static_cast<int>(values.cols()); }
  [[nodiscard]] Vector agent(int i) const { return values.col(i); }
};

double eval_utility(const VectorRef& bundle, const VectorRef& exponents);

// alpha_k * U(x) / x_k. Throws BoundaryError when a holding is below floor.
Vector eval_gradient(const VectorRef& bundle, const VectorRef& exponents,
                     double floor = kDefaultBoundaryFloor);

Vector utilities(const Allocation& allocation, const UtilityParams& params);
GradientMatrix gradient_matrix(const Allocation& allocation, const UtilityParams& params,
                               double floor = kDefaultBoundaryFloor);

// 1 - cos(a, b), evaluated as |a/|a| - b/|b||^2 / 2 to avoid cancellation
// near zero.
double cosine_defect(const VectorRef& a, const VectorRef& b);

// Max over agent pairs of the cosine defect between gradients. Zero exactly
// on the contract curve.
double mrs_dispersion(const GradientMatrix& gradients);
double mrs_dispersion(const Allocation& allocation, const UtilityParams& params,
                      double floor = kDefaultBoundaryFloor);

// Sum of utilities; nondecreasing along any admissible trade path.
double potential(const Allocation& allocation, const UtilityParams& params);

struct NegativeEntry {
  int good = 0;
  int agent = 0;
  double value = 0.0;
};

struct TotalsViolation {
  int good = 0;
  double row_sum = 0.0;
  double total = 0.0;
  double relative_residual = 0.0;
};

struct FeasibilityReport {
  bool feasible = true;
  std::vector<NegativeEntry> negative_entries;
  std::vector<TotalsViolation> totals_violations;
  double max_relative_residual = 0.0;

  [[nodiscard]] std::string describe() const;
};

FeasibilityReport feasibility_check(const Allocation& allocation,
                                    double relative_tolerance = kConservationTolerance);

// Throws DimensionError unless allocation and params agree on (m, n).
void require_compatible(const Allocation& allocation, const UtilityParams& params);

}  // namespace edgeworth
