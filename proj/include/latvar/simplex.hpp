#pragma once

#include <Eigen/Core>

namespace latvar {

/// maximize c^T x subject to A x <= b, x >= 0, with b >= 0 so the slack basis
/// is feasible.
struct LinearProgram {
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  Eigen::VectorXd c;
};

enum class LpStatus { optimal, unbounded, iteration_limit };

struct LpSolution {
  LpStatus status = LpStatus::iteration_limit;
  Eigen::VectorXd x;
  /// Row multipliers y >= 0 with A^T y >= c at optimality.
  Eigen::VectorXd duals;
  double objective = 0.0;
  int iterations = 0;
};

/// Dense tableau simplex with Bland's rule (smallest-index entering column,
/// smallest-index leaving variable among ratio ties).
LpSolution solve_lp(const LinearProgram& lp, double tol = 1e-11, int max_iterations = 0);

}  // namespace latvar
