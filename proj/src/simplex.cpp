#include "latvar/simplex.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "latvar/errors.hpp"

namespace latvar {

LpSolution solve_lp(const LinearProgram& lp, double tol, int max_iterations) {
  const Eigen::Index m = lp.A.rows();
  const Eigen::Index nv = lp.A.cols();
  if (lp.b.size() != m || lp.c.size() != nv) throw InvalidArgument("solve_lp: inconsistent dimensions");
  if (m > 0 && lp.b.minCoeff() < 0.0) throw InvalidArgument("solve_lp: right-hand side must be nonnegative");

  const Eigen::Index cols = nv + m + 1;
  const Eigen::Index rhs = cols - 1;
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m + 1, cols);
  t.block(0, 0, 1, nv) = -lp.c.transpose();
  t.block(1, 0, m, nv) = lp.A;
  t.block(1, nv, m, m).setIdentity();
  t.block(1, rhs, m, 1) = lp.b;

  std::vector<Eigen::Index> basis(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) basis[static_cast<std::size_t>(i)] = nv + i;

  if (max_iterations <= 0) max_iterations = static_cast<int>(50 * (m + nv) + 1000);

  LpSolution sol;
  for (int it = 0; it < max_iterations; ++it) {
    Eigen::Index enter = -1;
    for (Eigen::Index j = 0; j < rhs; ++j) {
      if (t(0, j) < -tol) {
        enter = j;
        break;
      }
    }
    if (enter < 0) {
      sol.status = LpStatus::optimal;
      sol.iterations = it;
      break;
    }
    Eigen::Index leave = -1;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 1; i <= m; ++i) {
      const double a = t(i, enter);
      if (a <= tol) continue;
      const double ratio = t(i, rhs) / a;
      const double slack = 1e-12 * (1.0 + std::abs(best_ratio == std::numeric_limits<double>::infinity() ? ratio : best_ratio));
      if (ratio < best_ratio - slack) {
        best_ratio = ratio;
        leave = i;
      } else if (std::abs(ratio - best_ratio) <= slack &&
                 basis[static_cast<std::size_t>(i - 1)] < basis[static_cast<std::size_t>(leave - 1)]) {
        leave = i;
      }
    }
    if (leave < 0) {
      sol.status = LpStatus::unbounded;
      sol.iterations = it;
      return sol;
    }
    t.row(leave) /= t(leave, enter);
    for (Eigen::Index i = 0; i <= m; ++i) {
      if (i == leave) continue;
      const double factor = t(i, enter);
      if (factor != 0.0) t.row(i) -= factor * t.row(leave);
    }
    basis[static_cast<std::size_t>(leave - 1)] = enter;
    sol.iterations = it + 1;
  }
  if (sol.status != LpStatus::optimal) return sol;

  sol.x = Eigen::VectorXd::Zero(nv);
  for (Eigen::Index i = 0; i < m; ++i) {
    const Eigen::Index var = basis[static_cast<std::size_t>(i)];
    if (var < nv) sol.x[var] = t(i + 1, rhs);
  }
  sol.duals = t.block(0, nv, 1, m).transpose();
  sol.objective = t(0, rhs);
  return sol;
}

}  // namespace latvar
