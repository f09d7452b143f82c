#pragma once

#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "latvar/grid.hpp"
#include "latvar/multi_index.hpp"
#include "latvar/polynomial.hpp"

namespace latvar {

// ============================================================================
// Best uniform approximation by polynomials of total degree <= k - 1
// ============================================================================

struct ApproxResult {
  /// E_k(f; Q) >= 0, the sup-norm error of `minimizer` on the lattice points of Q.
  double value = 0.0;
  Polynomial minimizer{1, 0};
  /// Lattice points where |f - minimizer| equals value within 1e-9.
  std::vector<LatticePoint> certificate;
  /// Dual optimum: signed weights with vanishing moments through degree k - 1
  /// and unit l1 norm, whose pairing with f equals `value`.
  std::vector<std::pair<LatticePoint, double>> extremal_weights;
  double dual_value = 0.0;
};

/// Solves min_t { t : -t <= f(x) - sum_a c_a phi_a(x) <= t, x in Q } with the
/// dense simplex, in the basis ((x - center(Q)) / side(Q))^alpha. Throws
/// SolverFailure when primal and dual do not agree within 1e-9.
ApproxResult best_minimax_poly(const GridFunction& f, const LatticeCube& q, int k);

/// Value-only shorthand for best_minimax_poly(f, q, k).value.
double local_approximation(const GridFunction& f, const LatticeCube& q, int k);

/// E_k(f; Q) from the dual side: max over point subsets S of size 2..dim+1
/// whose moment matrix has a one-dimensional left kernel w of |f.w| / |w|_1.
/// Exponential; rejects cubes with more than max_points lattice points.
double minimax_reference_value(const GridFunction& f, const LatticeCube& q, int k, std::size_t max_points = 12);

// ============================================================================
// Interpolation projections
// ============================================================================

/// k lattice nodes in [lo, hi] closest to lo + i (hi - lo) / (k - 1),
/// i = 0..k-1; for k == 1 the two endpoints.
std::vector<int> interpolation_nodes(int lo, int hi, int k);

/// k = 1: the constant (f(a) + f(b)) / 2 at the endpoints of I. k > 1: the
/// degree k - 1 Lagrange interpolant at interpolation_nodes.
Polynomial interpolate_1d(const GridFunction& f, const LatticeInterval& interval, int k);

/// n x n matrix of the 1-d operator L_k on the full axis [0, n - 1]:
/// (L_k g)(r) = sum_c P(r, c) g(c).
Eigen::MatrixXd interpolation_operator(int n, int k);

/// Lebesgue constant of interpolation_operator(n, k) (max absolute row sum).
double interpolation_operator_norm(int n, int k);

/// Applies an n x n operator to every line of f parallel to `axis`.
GridFunction apply_along_axis(const GridFunction& f, int axis, const Eigen::MatrixXd& op);

/// L_alpha f = prod_i L^i_{alpha_i} f, axes applied in `axis_order`
/// (default 0..d-1). Requires every alpha_i >= 1.
GridFunction tensor_projection(const GridFunction& f, const MultiIndex& alpha,
                               std::optional<std::vector<int>> axis_order = std::nullopt);

/// f - prod_i (1 - L^i_{alpha_i}) f; axes with alpha_i = 0 contribute the
/// identity factor.
GridFunction mixed_projection(const GridFunction& f, const MultiIndex& alpha);

struct MixedProjectionReport {
  GridFunction projection;
  double residual_norm;      ///< ||f - projection||_inf
  double mixed_oscillation;  ///< osc_alpha over the whole grid
  double operator_bound;     ///< prod over active axes of (1 + ||L_{alpha_i}||)
  std::optional<double> measured_constant;  ///< residual / oscillation when > 0
};

MixedProjectionReport mixed_projection_report(const GridFunction& f, const MultiIndex& alpha);

/// The order in which whitney_projection composes mixed projections:
/// multi_indices_of_order(d, k), i.e. descending lexicographic. The product
/// L_{a1} L_{a2} ... L_{aN} is applied right to left.
std::vector<MultiIndex> whitney_enumeration(int d, int k);

GridFunction whitney_projection(const GridFunction& f, int k);

struct WhitneyCertificate {
  double e_k = 0.0;
  double osc_k = 0.0;
  /// osc_k / E_k when E_k > 1e-9.
  std::optional<double> ratio;
  /// osc_k <= 2^k E_k within the tolerance.
  bool lower_bound_holds = true;
  double lower_bound_slack = 0.0;  ///< 2^k E_k - osc_k
};

WhitneyCertificate whitney_certificate(const GridFunction& f, const LatticeCube& q, int k);

}  // namespace latvar
