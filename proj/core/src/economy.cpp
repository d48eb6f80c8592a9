#include "edgeworth/economy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "edgeworth/errors.hpp"

namespace edgeworth {

namespace {

std::string shape(Eigen::Index rows, Eigen::Index cols) {
  std::ostringstream os;
  os << rows << "x" << cols;
  return os.str();
}

}  // namespace

Allocation::Allocation(Matrix holdings) : holdings_(std::move(holdings)) {
  if (holdings_.size() == 0) throw DimensionError("allocation must have at least one good and one agent");
  totals_ = holdings_.rowwise().sum();
}

Allocation::Allocation(Matrix holdings, Vector totals)
    : holdings_(std::move(holdings)), totals_(std::move(totals)) {
  if (holdings_.size() == 0) throw DimensionError("allocation must have at least one good and one agent");
  if (totals_.size() != holdings_.rows()) {
    throw DimensionError("totals length " + std::to_string(totals_.size()) +
                         " does not match good count " + std::to_string(holdings_.rows()));
  }
}

Allocation Allocation::from_bundles(const std::vector<std::vector<double>>& bundles) {
  if (bundles.empty() || bundles.front().empty()) throw DimensionError("empty allocation");
  const auto m = static_cast<Eigen::Index>(bundles.front().size());
  Matrix x(m, static_cast<Eigen::Index>(bundles.size()));
  for (std::size_t i = 0; i < bundles.size(); ++i) {
    if (static_cast<Eigen::Index>(bundles[i].size()) != m) {
      throw DimensionError("agent " + std::to_string(i) + " bundle has " +
                           std::to_string(bundles[i].size()) + " goods, expected " + std::to_string(m));
    }
    for (Eigen::Index k = 0; k < m; ++k) x(k, static_cast<Eigen::Index>(i)) = bundles[i][k];
  }
  return Allocation(std::move(x));
}

Allocation Allocation::with_holdings(Matrix holdings) const {
  if (holdings.rows() != holdings_.rows() || holdings.cols() != holdings_.cols()) {
    throw DimensionError("holdings shape " + shape(holdings.rows(), holdings.cols()) +
                         " differs from " + shape(holdings_.rows(), holdings_.cols()));
  }
  return Allocation(std::move(holdings), totals_);
}

UtilityParams::UtilityParams(Matrix exponents) : exponents_(std::move(exponents)) {
  if (exponents_.rows() < 2) throw DimensionError("utility needs at least two goods");
  if (exponents_.cols() < 1) throw DimensionError("utility needs at least one agent");
  for (Eigen::Index i = 0; i < exponents_.cols(); ++i) {
    for (Eigen::Index k = 0; k < exponents_.rows(); ++k) {
      const double a = exponents_(k, i);
      if (!(a > 0.0 && a < 1.0)) {
        throw ValidationError("agent " + std::to_string(i) + " exponent " + std::to_string(k) +
                              " must lie in (0,1)");
      }
    }
    const double s = exponents_.col(i).sum();
    if (std::abs(s - 1.0) > kExponentSumTolerance) {
      throw ValidationError("agent " + std::to_string(i) + " exponents sum to " +
                            std::to_string(s) + ", expected 1");
    }
  }
}

UtilityParams UtilityParams::two_good(const std::vector<double>& alphas) {
  Matrix a(2, static_cast<Eigen::Index>(alphas.size()));
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    a(0, static_cast<Eigen::Index>(i)) = alphas[i];
    a(1, static_cast<Eigen::Index>(i)) = 1.0 - alphas[i];
  }
  return UtilityParams(std::move(a));
}

UtilityParams UtilityParams::from_agents(const std::vector<std::vector<double>>& exponents) {
  if (exponents.empty() || exponents.front().empty()) throw DimensionError("empty exponents");
  const auto m = static_cast<Eigen::Index>(exponents.front().size());
  Matrix a(m, static_cast<Eigen::Index>(exponents.size()));
  for (std::size_t i = 0; i < exponents.size(); ++i) {
    if (static_cast<Eigen::Index>(exponents[i].size()) != m) {
      throw DimensionError("agent " + std::to_string(i) + " has " + std::to_string(exponents[i].size()) +
                           " exponents, expected " + std::to_string(m));
    }
    for (Eigen::Index k = 0; k < m; ++k) a(k, static_cast<Eigen::Index>(i)) = exponents[i][k];
  }
  return UtilityParams(std::move(a));
}

double eval_utility(const VectorRef& bundle, const VectorRef& exponents) {
  if (bundle.size() != exponents.size()) {
    throw DimensionError("bundle has " + std::to_string(bundle.size()) + " goods but " +
                         std::to_string(exponents.size()) + " exponents given");
  }
  if (bundle.size() == 0) throw DimensionError("empty bundle");
  double u = 1.0;
  for (Eigen::Index k = 0; k < bundle.size(); ++k) {
    if (bundle[k] < 0.0) throw BoundaryError("negative holding in bundle");
    if (bundle[k] == 0.0) return 0.0;
    u *= std::pow(bundle[k], exponents[k]);
  }
  return u;
}

Vector eval_gradient(const VectorRef& bundle, const VectorRef& exponents, double floor) {
  if (bundle.size() != exponents.size()) {
    throw DimensionError("bundle has " + std::to_string(bundle.size()) + " goods but " +
                         std::to_string(exponents.size()) + " exponents given");
  }
  for (Eigen::Index k = 0; k < bundle.size(); ++k) {
    if (!(bundle[k] >= floor)) {
      throw BoundaryError("holding of good " + std::to_string(k) + " is " + std::to_string(bundle[k]) +
                          ", below the boundary floor");
    }
  }
  const double u = eval_utility(bundle, exponents);
  return (exponents.array() * u / bundle.array()).matrix();
}

void require_compatible(const Allocation& allocation, const UtilityParams& params) {
  if (allocation.goods() != params.goods() || allocation.agents() != params.agents()) {
    throw DimensionError("allocation is " + shape(allocation.goods(), allocation.agents()) +
                         " but utility params are " + shape(params.goods(), params.agents()));
  }
}

Vector utilities(const Allocation& allocation, const UtilityParams& params) {
  require_compatible(allocation, params);
  Vector u(allocation.agents());
  for (int i = 0; i < allocation.agents(); ++i) {
    u[i] = eval_utility(allocation.holdings().col(i), params.exponents().col(i));
  }
  return u;
}

GradientMatrix gradient_matrix(const Allocation& allocation, const UtilityParams& params, double floor) {
  require_compatible(allocation, params);
  GradientMatrix g{Matrix(allocation.goods(), allocation.agents())};
  for (int i = 0; i < allocation.agents(); ++i) {
    g.values.col(i) = eval_gradient(allocation.holdings().col(i), params.exponents().col(i), floor);
  }
  return g;
}

double cosine_defect(const VectorRef& a, const VectorRef& b) {
  if (a.size() != b.size()) throw DimensionError("cosine defect of vectors with different lengths");
  const double na = a.norm();
  const double nb = b.norm();
  if (na == 0.0 || nb == 0.0) throw DimensionError("cosine defect of a zero vector");
  return 0.5 * (a / na - b / nb).squaredNorm();
}

double mrs_dispersion(const GradientMatrix& gradients) {
  double worst = 0.0;
  const int n = gradients.agents();
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      worst = std::max(worst, cosine_defect(gradients.values.col(i), gradients.values.col(j)));
    }
  }
  return worst;
}

double mrs_dispersion(const Allocation& allocation, const UtilityParams& params, double floor) {
  return mrs_dispersion(gradient_matrix(allocation, params, floor));
}

double potential(const Allocation& allocation, const UtilityParams& params) {
  return utilities(allocation, params).sum();
}

FeasibilityReport feasibility_check(const Allocation& allocation, double relative_tolerance) {
  FeasibilityReport report;
  const Matrix& x = allocation.holdings();
  for (Eigen::Index i = 0; i < x.cols(); ++i) {
    for (Eigen::Index k = 0; k < x.rows(); ++k) {
      if (x(k, i) < 0.0) {
        report.negative_entries.push_back({static_cast<int>(k), static_cast<int>(i), x(k, i)});
      }
    }
  }
  for (Eigen::Index k = 0; k < x.rows(); ++k) {
    const double row_sum = x.row(k).sum();
    const double total = allocation.totals()[k];
    const double scale = std::max(std::abs(total), std::numeric_limits<double>::min());
    const double residual = std::abs(row_sum - total) / scale;
    report.max_relative_residual = std::max(report.max_relative_residual, residual);
    if (residual > relative_tolerance) {
      report.totals_violations.push_back({static_cast<int>(k), row_sum, total, residual});
    }
  }
  report.feasible = report.negative_entries.empty() && report.totals_violations.empty();
  return report;
}

std::string FeasibilityReport::describe() const {
  if (feasible) return "feasible";
  std::ostringstream os;
  os << "infeasible:";
  for (const auto& e : negative_entries) {
    os << " x[good " << e.good << ", agent " << e.agent << "] = " << e.value << ";";
  }
  for (const auto& v : totals_violations) {
    os << " good " << v.good << " sums to " << v.row_sum << " vs total " << v.total
       << " (relative residual " << v.relative_residual << ");";
  }
  return os.str();
}

}  // namespace edgeworth
