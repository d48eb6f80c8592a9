#include "edgeworth/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/SVD>

#include "edgeworth/errors.hpp"

namespace edgeworth {

namespace {

void require_same_length(const VectorRef& a, const VectorRef& b) {
  if (a.size() == 0 || b.size() == 0) throw DimensionError("gradient vectors must be nonempty");
  if (a.size() != b.size()) {
    throw DimensionError("gradient lengths differ: " + std::to_string(a.size()) + " vs " +
                         std::to_string(b.size()));
  }
}

// Columns of V spanning the numerical nullspace of `a`.
Matrix nullspace(const Matrix& a) {
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullV);
  const Vector& sigma = svd.singularValues();
  const double largest = sigma.size() > 0 ? sigma[0] : 0.0;
  Eigen::Index rank = 0;
  for (Eigen::Index k = 0; k < sigma.size(); ++k) {
    if (sigma[k] > kNullspaceCutoff * largest) ++rank;
  }
  return svd.matrixV().rightCols(a.cols() - rank);
}

}  // namespace

double angle_between(const VectorRef& a, const VectorRef& b) {
  require_same_length(a, b);
  const double na = a.norm();
  const double nb = b.norm();
  if (na == 0.0 || nb == 0.0) return 0.0;
  const Vector ua = a / na;
  const Vector ub = b / nb;
  return 2.0 * std::atan2((ua - ub).norm(), (ua + ub).norm());
}

Vector pairwise_fair_direction(const VectorRef& mu_i, const VectorRef& mu_j) {
  require_same_length(mu_i, mu_j);
  const Vector s = mu_i + mu_j;
  const double s2 = s.squaredNorm();
  if (s2 == 0.0 || angle_between(mu_i, mu_j) < kDependenceAngle) {
    return Vector::Zero(mu_i.size());
  }
  // mu_i = (s + d) / 2, so the rejection of mu_i from s is half the
  // rejection of d. Working from d avoids cancellation when the gradients
  // are nearly parallel and keeps f_ji = -f_ij exactly.
  const Vector d = mu_i - mu_j;
  Vector f = 0.5 * (d - (d.dot(s) / s2) * s);
  f -= (f.dot(s) / s2) * s;
  return f;
}

bool pairwise_additive_inverse_check(const VectorRef& mu_i, const VectorRef& mu_j) {
  const Vector sum = pairwise_fair_direction(mu_i, mu_j) + pairwise_fair_direction(mu_j, mu_i);
  return sum.size() == 0 || sum.cwiseAbs().maxCoeff() <= 1e-12;
}

void validate_weights(const Matrix& weights, int agents) {
  if (weights.rows() != agents || weights.cols() != agents) {
    throw NetworkError("weight matrix must be " + std::to_string(agents) + "x" + std::to_string(agents));
  }
  for (int i = 0; i < agents; ++i) {
    if (weights(i, i) != 0.0) throw NetworkError("weight matrix diagonal must be zero");
    for (int j = 0; j < agents; ++j) {
      const double w = weights(i, j);
      if (!std::isfinite(w) || w < 0.0) {
        throw NetworkError("weight (" + std::to_string(i) + "," + std::to_string(j) + ") is negative");
      }
      if (std::abs(w - weights(j, i)) > 1e-12 * std::max(1.0, std::abs(w))) {
        throw NetworkError("weight matrix is not symmetric at (" + std::to_string(i) + "," +
                           std::to_string(j) + ")");
      }
    }
  }
}

TradeField network_trade_field(const GradientMatrix& gradients, const Matrix& weights) {
  const int n = gradients.agents();
  validate_weights(weights, n);
  TradeField field{Matrix::Zero(gradients.goods(), n)};
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double w = weights(i, j);
      if (w == 0.0) continue;
      const Vector f = pairwise_fair_direction(gradients.values.col(i), gradients.values.col(j));
      field.directions.col(i) += w * f;
      field.directions.col(j) -= w * f;
    }
  }
  return field;
}

MultilateralSolution multilateral_fair_solver(const GradientMatrix& gradients) {
  const int n = gradients.agents();
  const int m = gradients.goods();
  if (n < 2 || m < 2) throw DimensionError("multilateral solver needs n >= 2 agents and m >= 2 goods");
  if (!(gradients.values.array() > 0.0).all()) {
    throw BoundaryError("multilateral solver needs strictly positive gradients");
  }

  const int pair_rows = n * (n - 1);
  Matrix system = Matrix::Zero(pair_rows + m, n * m);
  int row = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      system.block(row, i * m, 1, m) = (gradients.values.col(i) + gradients.values.col(j)).transpose();
      ++row;
    }
  }
  for (int i = 0; i < n; ++i) {
    system.block(pair_rows, i * m, m, m) = Matrix::Identity(m, m);
  }

  MultilateralSolution sol;
  const Matrix kernel = nullspace(system);
  sol.nullspace_dimension = static_cast<int>(kernel.cols());
  for (Eigen::Index c = 0; c < kernel.cols(); ++c) {
    const Vector v = kernel.col(c);
    sol.max_constraint_residual = std::max(sol.max_constraint_residual, (system * v).cwiseAbs().maxCoeff());
    sol.basis.emplace_back(Eigen::Map<const Matrix>(v.data(), m, n));
    if (v.norm() > 0.0) sol.trade_exists = true;
  }

  for (int i = 0; i < n; ++i) {
    Matrix constraints(n - 1, m);
    int r = 0;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      constraints.row(r++) = (gradients.values.col(i) + gradients.values.col(j)).transpose();
    }
    sol.agent_constraint_spaces.push_back(nullspace(constraints));
  }
  return sol;
}

InvariantReport invariant_report(const GradientMatrix& gradients, const TradeField& field) {
  if (gradients.goods() != field.goods() || gradients.agents() != field.agents()) {
    throw DimensionError("gradient and trade field shapes differ");
  }
  InvariantReport r;
  const int n = gradients.agents();
  r.zero_sum_residual = field.directions.rowwise().sum().cwiseAbs().maxCoeff();
  r.utility_rates = (gradients.values.array() * field.directions.array()).colwise().sum().transpose();
  r.min_utility_rate = r.utility_rates.minCoeff();
  r.positive_gradient_ok = r.min_utility_rate >= -1e-12;
  for (int i = 0; i < n && !r.independent_pair; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (angle_between(gradients.values.col(i), gradients.values.col(j)) > kDependenceAngle) {
        r.independent_pair = true;
        break;
      }
    }
  }
  r.field_nonzero = field.directions.cwiseAbs().maxCoeff() > 0.0;
  r.trade_ok = !r.independent_pair || r.field_nonzero;
  return r;
}

}  // namespace edgeworth
