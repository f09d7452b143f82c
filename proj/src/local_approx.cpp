#include "latvar/local_approx.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <Eigen/Dense>

#include "latvar/differences.hpp"
#include "latvar/simplex.hpp"

namespace latvar {

namespace {

constexpr double kCertTol = 1e-9;

std::string describe(const LatticeCube& q, int k) {
  std::ostringstream os;
  os << to_string(q) << ", k=" << k;
  return os.str();
}

}  // namespace

// ---------------------------------------------------------------------------
// best_minimax_poly
// ---------------------------------------------------------------------------

ApproxResult best_minimax_poly(const GridFunction& f, const LatticeCube& q, int k) {
  if (k < 1) throw InvalidArgument("best_minimax_poly: order must be >= 1");
  const int d = f.dim();
  const int n = f.points_per_axis();
  if (!q.fits(d, n)) throw InvalidArgument("best_minimax_poly: " + to_string(q) + " is not inside the grid");

  const auto pts = cube_points(q);
  const auto N = static_cast<Eigen::Index>(pts.size());
  std::vector<std::vector<double>> xs;
  xs.reserve(pts.size());
  Eigen::VectorXd fv(N);
  for (Eigen::Index j = 0; j < N; ++j) {
    xs.push_back(f.coordinates(pts[static_cast<std::size_t>(j)]));
    fv[j] = f(pts[static_cast<std::size_t>(j)]);
  }

  const auto basis = multi_indices_up_to(d, k - 1);
  const auto M = static_cast<Eigen::Index>(basis.size());
  const auto center = q.center(n);
  const double scale = static_cast<double>(q.side) / (n - 1);

  ApproxResult res;
  res.minimizer = Polynomial(d, k - 1, center, scale);

  const double hi = fv.maxCoeff();
  const double lo = fv.minCoeff();
  const double mid = 0.5 * (hi + lo);
  const double half = 0.5 * (hi - lo);
  const MultiIndex constant{std::vector<int>(static_cast<std::size_t>(d), 0)};

  if (!(half > 0.0)) {
    res.value = 0.0;
    res.dual_value = 0.0;
    res.minimizer.set_coefficient(constant, mid);
    res.certificate = pts;
    return res;
  }

  if (k == 1) {
    // Best constant is the midrange; +-1/2 at an argmax/argmin pair is the dual optimum.
    Eigen::Index imax = 0, imin = 0;
    fv.maxCoeff(&imax);
    fv.minCoeff(&imin);
    res.value = half;
    res.dual_value = half;
    res.minimizer.set_coefficient(constant, mid);
    for (Eigen::Index j = 0; j < N; ++j)
      if (std::abs(fv[j] - mid) >= half - kCertTol * half) res.certificate.push_back(pts[static_cast<std::size_t>(j)]);
    res.extremal_weights.emplace_back(pts[static_cast<std::size_t>(std::min(imax, imin))], imax < imin ? 0.5 : -0.5);
    res.extremal_weights.emplace_back(pts[static_cast<std::size_t>(std::max(imax, imin))], imax < imin ? -0.5 : 0.5);
    return res;
  }

  // Normalized data g in [-1, 1]; E(f) = half * E(g).
  const Eigen::VectorXd g = (fv.array() - mid) / half;
  const Eigen::MatrixXd phi = local_basis_matrix(xs, basis, center, scale);

  // Variables [c+ (M), c- (M), tau+, tau-], t = tau + shift keeps b >= 0.
  const double shift = 2.0;
  LinearProgram lp;
  lp.A = Eigen::MatrixXd::Zero(2 * N, 2 * M + 2);
  lp.b.resize(2 * N);
  lp.c = Eigen::VectorXd::Zero(2 * M + 2);
  lp.c[2 * M] = -1.0;
  lp.c[2 * M + 1] = 1.0;
  for (Eigen::Index j = 0; j < N; ++j) {
    // phi c - t <= g   (residual >= -t)
    lp.A.block(j, 0, 1, M) = phi.row(j);
    lp.A.block(j, M, 1, M) = -phi.row(j);
    lp.A(j, 2 * M) = -1.0;
    lp.A(j, 2 * M + 1) = 1.0;
    lp.b[j] = g[j] + shift;
    // -phi c - t <= -g (residual <= t)
    lp.A.block(N + j, 0, 1, M) = -phi.row(j);
    lp.A.block(N + j, M, 1, M) = phi.row(j);
    lp.A(N + j, 2 * M) = -1.0;
    lp.A(N + j, 2 * M + 1) = 1.0;
    lp.b[N + j] = shift - g[j];
  }

  const LpSolution sol = solve_lp(lp);
  if (sol.status != LpStatus::optimal)
    throw SolverFailure("best_minimax_poly: simplex did not reach an optimum on " + describe(q, k));

  const Eigen::VectorXd coef = sol.x.head(M) - sol.x.segment(M, M);
  const Eigen::VectorXd err = g - phi * coef;
  const double primal = err.cwiseAbs().maxCoeff();

  // Row multipliers: w = y_lower - y_upper is the extremal moment-free weight.
  const Eigen::VectorXd w = sol.duals.tail(N) - sol.duals.head(N);
  const double w_l1 = w.cwiseAbs().sum();
  const double moment_residual = M > 0 ? (phi.transpose() * w).cwiseAbs().maxCoeff() : 0.0;
  const double dual = g.dot(w);
  if (w_l1 > 1.0 + kCertTol || moment_residual > kCertTol || std::abs(primal - dual) > kCertTol) {
    std::ostringstream os;
    os << "best_minimax_poly: optimality certificate failed on " << describe(q, k) << " (primal " << primal
       << ", dual " << dual << ", |w|_1 " << w_l1 << ", moment residual " << moment_residual << ")";
    throw SolverFailure(os.str());
  }

  res.value = half * primal;
  res.dual_value = half * dual;
  for (Eigen::Index a = 0; a < M; ++a) {
    double c = half * coef[a];
    if (basis[static_cast<std::size_t>(a)] == constant) c += mid;
    res.minimizer.set_coefficient(basis[static_cast<std::size_t>(a)], c);
  }
  if (std::none_of(basis.begin(), basis.end(), [&](const MultiIndex& m) { return m == constant; }))
    res.minimizer.set_coefficient(constant, mid);
  for (Eigen::Index j = 0; j < N; ++j) {
    if (std::abs(err[j]) >= primal - kCertTol) res.certificate.push_back(pts[static_cast<std::size_t>(j)]);
    if (std::abs(w[j]) > 1e-12) res.extremal_weights.emplace_back(pts[static_cast<std::size_t>(j)], w[j]);
  }
  return res;
}

double local_approximation(const GridFunction& f, const LatticeCube& q, int k) {
  return best_minimax_poly(f, q, k).value;
}

double minimax_reference_value(const GridFunction& f, const LatticeCube& q, int k, std::size_t max_points) {
  if (k < 1) throw InvalidArgument("minimax_reference_value: order must be >= 1");
  const auto pts = cube_points(q);
  if (pts.size() > max_points) {
    std::ostringstream os;
    os << "minimax_reference_value: cube has " << pts.size() << " points, limit is " << max_points;
    throw GuardViolation(os.str());
  }
  const auto basis = multi_indices_up_to(f.dim(), k - 1);
  const std::size_t m = basis.size();
  std::vector<std::vector<double>> xs;
  for (const auto& p : pts) xs.push_back(f.coordinates(p));
  const Eigen::MatrixXd phi = local_basis_matrix(xs, basis, q.center(f.points_per_axis()),
                                                 static_cast<double>(q.side) / (f.points_per_axis() - 1));
  double best = 0.0;
  std::vector<std::size_t> subset;
  const std::size_t limit = std::min(m + 1, pts.size());
  auto visit = [&](auto&& self, std::size_t start) -> void {
    if (subset.size() >= 2) {
      Eigen::MatrixXd a(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(subset.size()));
      for (std::size_t j = 0; j < subset.size(); ++j) a.col(static_cast<Eigen::Index>(j)) = phi.row(static_cast<Eigen::Index>(subset[j])).transpose();
      Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
      lu.setThreshold(1e-10);
      const Eigen::MatrixXd ker = lu.kernel();
      if (ker.cols() == 1 && lu.dimensionOfKernel() == 1) {
        const Eigen::VectorXd w = ker.col(0);
        const double l1 = w.cwiseAbs().sum();
        if (l1 > 0.0 && (w.array().abs() > 1e-12 * l1).all()) {
          CompensatedSum s;
          for (std::size_t j = 0; j < subset.size(); ++j) s.add(w[static_cast<Eigen::Index>(j)] * f(pts[subset[j]]));
          best = std::max(best, std::abs(s.value()) / l1);
        }
      }
    }
    if (subset.size() == limit) return;
    for (std::size_t i = start; i < pts.size(); ++i) {
      subset.push_back(i);
      self(self, i + 1);
      subset.pop_back();
    }
  };
  visit(visit, 0);
  return best;
}

// ---------------------------------------------------------------------------
// 1-d interpolation
// ---------------------------------------------------------------------------

std::vector<int> interpolation_nodes(int lo, int hi, int k) {
  if (k < 1) throw InvalidArgument("interpolation_nodes: order must be >= 1");
  if (hi <= lo) throw InvalidArgument("interpolation_nodes: interval must contain at least two lattice points");
  if (k == 1) return {lo, hi};
  if (hi - lo + 1 < k) {
    std::ostringstream os;
    os << "interpolation_nodes: interval has " << hi - lo + 1 << " lattice points, need " << k;
    throw InvalidArgument(os.str());
  }
  std::vector<int> nodes(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i)
    nodes[static_cast<std::size_t>(i)] =
        lo + static_cast<int>(std::lround(static_cast<double>(i) * (hi - lo) / (k - 1)));
  return nodes;
}

namespace {

// Lagrange weights W (points x nodes) so that the interpolant at node values v
// evaluates to W v at `points` (all coordinates in lattice index units).
Eigen::MatrixXd lagrange_weights(const std::vector<int>& nodes, const std::vector<int>& points) {
  const int k = static_cast<int>(nodes.size());
  const double c = 0.5 * (nodes.front() + nodes.back());
  const double s = std::max(1.0, static_cast<double>(nodes.back() - nodes.front()));
  Eigen::MatrixXd v(k, k);
  for (int r = 0; r < k; ++r)
    for (int e = 0; e < k; ++e) v(r, e) = std::pow((nodes[static_cast<std::size_t>(r)] - c) / s, e);
  Eigen::MatrixXd ev(static_cast<Eigen::Index>(points.size()), k);
  for (std::size_t r = 0; r < points.size(); ++r)
    for (int e = 0; e < k; ++e) ev(static_cast<Eigen::Index>(r), e) = std::pow((points[r] - c) / s, e);
  // W = ev * v^{-1}
  return v.transpose().fullPivLu().solve(ev.transpose()).transpose();
}

}  // namespace

Polynomial interpolate_1d(const GridFunction& f, const LatticeInterval& interval, int k) {
  if (f.dim() != 1) throw InvalidArgument("interpolate_1d: grid function must be one-dimensional");
  if (interval.dim() != 1 || !interval.is_nontrivial())
    throw InvalidArgument("interpolate_1d: interval must be a nontrivial 1-d interval");
  const int lo = interval.lower[0];
  const int hi = interval.upper[0];
  if (lo < 0 || hi > f.points_per_axis() - 1) throw InvalidArgument("interpolate_1d: interval outside grid");
  const auto nodes = interpolation_nodes(lo, hi, k);
  const int n = f.points_per_axis();
  const double a = static_cast<double>(lo) / (n - 1);
  const double b = static_cast<double>(hi) / (n - 1);
  Polynomial p(1, std::max(k - 1, 0), {0.5 * (a + b)}, b - a);
  if (k == 1) {
    p.set_coefficient(MultiIndex{{0}}, 0.5 * (f(LatticePoint{lo}) + f(LatticePoint{hi})));
    return p;
  }
  Eigen::MatrixXd v(k, k);
  Eigen::VectorXd rhs(k);
  for (int r = 0; r < k; ++r) {
    const double x = static_cast<double>(nodes[static_cast<std::size_t>(r)]) / (n - 1);
    const double t = (x - 0.5 * (a + b)) / (b - a);
    for (int e = 0; e < k; ++e) v(r, e) = std::pow(t, e);
    rhs[r] = f(LatticePoint{nodes[static_cast<std::size_t>(r)]});
  }
  const Eigen::VectorXd c = v.fullPivLu().solve(rhs);
  for (int e = 0; e < k; ++e) p.set_coefficient(MultiIndex{{e}}, c[e]);
  return p;
}

Eigen::MatrixXd interpolation_operator(int n, int k) {
  if (n < 2) throw InvalidArgument("interpolation_operator: need n >= 2");
  const auto nodes = interpolation_nodes(0, n - 1, k);
  Eigen::MatrixXd op = Eigen::MatrixXd::Zero(n, n);
  if (k == 1) {
    op.col(0).setConstant(0.5);
    op.col(n - 1).setConstant(0.5);
    return op;
  }
  std::vector<int> all(static_cast<std::size_t>(n));
  std::iota(all.begin(), all.end(), 0);
  const Eigen::MatrixXd w = lagrange_weights(nodes, all);
  for (int j = 0; j < k; ++j) op.col(nodes[static_cast<std::size_t>(j)]) = w.col(j);
  return op;
}

double interpolation_operator_norm(int n, int k) {
  return interpolation_operator(n, k).cwiseAbs().rowwise().sum().maxCoeff();
}

GridFunction apply_along_axis(const GridFunction& f, int axis, const Eigen::MatrixXd& op) {
  const int n = f.points_per_axis();
  if (axis < 0 || axis >= f.dim()) throw InvalidArgument("apply_along_axis: axis out of range");
  if (op.rows() != n || op.cols() != n) throw InvalidArgument("apply_along_axis: operator size mismatch");
  const std::size_t stride = f.stride(axis);
  Eigen::VectorXd out(static_cast<Eigen::Index>(f.size()));
  Eigen::VectorXd line(n);
  for (std::size_t base = 0; base < f.size(); ++base) {
    if ((base / stride) % static_cast<std::size_t>(n) != 0) continue;
    for (int i = 0; i < n; ++i) line[i] = f[base + static_cast<std::size_t>(i) * stride];
    const Eigen::VectorXd mapped = op * line;
    for (int i = 0; i < n; ++i) out[static_cast<Eigen::Index>(base + static_cast<std::size_t>(i) * stride)] = mapped[i];
  }
  return GridFunction(f.dim(), n, std::move(out));
}

namespace {

void check_alpha(const GridFunction& f, const MultiIndex& alpha, bool require_positive, const char* who) {
  if (alpha.dim() != f.dim()) throw InvalidArgument(std::string(who) + ": multi-index dimension mismatch");
  for (int a : alpha.entries) {
    if (a < 0 || (require_positive && a < 1))
      throw InvalidArgument(std::string(who) + (require_positive ? ": every alpha_i must be >= 1" : ": negative alpha_i"));
    if (a > f.points_per_axis()) {
      std::ostringstream os;
      os << who << ": alpha_i = " << a << " needs at least that many points per axis, grid has "
         << f.points_per_axis();
      throw InvalidArgument(os.str());
    }
  }
  if (alpha.order() == 0) throw InvalidArgument(std::string(who) + ": multi-index must have a positive entry");
}

GridFunction subtract(const GridFunction& a, const GridFunction& b) {
  return GridFunction(a.dim(), a.points_per_axis(), a.values() - b.values());
}

}  // namespace

GridFunction tensor_projection(const GridFunction& f, const MultiIndex& alpha,
                               std::optional<std::vector<int>> axis_order) {
  check_alpha(f, alpha, true, "tensor_projection");
  std::vector<int> order;
  if (axis_order) {
    order = *axis_order;
    auto sorted = order;
    std::sort(sorted.begin(), sorted.end());
    std::vector<int> expect(static_cast<std::size_t>(f.dim()));
    std::iota(expect.begin(), expect.end(), 0);
    if (sorted != expect) throw InvalidArgument("tensor_projection: axis order must be a permutation of the axes");
  } else {
    order.resize(static_cast<std::size_t>(f.dim()));
    std::iota(order.begin(), order.end(), 0);
  }
  GridFunction g = f;
  for (int axis : order)
    g = apply_along_axis(g, axis, interpolation_operator(f.points_per_axis(), alpha.entries[static_cast<std::size_t>(axis)]));
  return g;
}

GridFunction mixed_projection(const GridFunction& f, const MultiIndex& alpha) {
  check_alpha(f, alpha, false, "mixed_projection");
  GridFunction residual = f;
  for (int axis = 0; axis < f.dim(); ++axis) {
    const int a = alpha.entries[static_cast<std::size_t>(axis)];
    if (a == 0) continue;
    const GridFunction projected = apply_along_axis(residual, axis, interpolation_operator(f.points_per_axis(), a));
    residual = subtract(residual, projected);
  }
  return subtract(f, residual);
}

MixedProjectionReport mixed_projection_report(const GridFunction& f, const MultiIndex& alpha) {
  GridFunction proj = mixed_projection(f, alpha);
  const double residual = (f.values() - proj.values()).cwiseAbs().maxCoeff();
  const double osc = osc_mixed(f, whole_grid_cube(f), alpha);
  double bound = 1.0;
  for (int a : alpha.entries)
    if (a > 0) bound *= 1.0 + interpolation_operator_norm(f.points_per_axis(), a);
  std::optional<double> measured;
  if (osc > 0.0) measured = residual / osc;
  return MixedProjectionReport{std::move(proj), residual, osc, bound, measured};
}

std::vector<MultiIndex> whitney_enumeration(int d, int k) { return multi_indices_of_order(d, k); }

GridFunction whitney_projection(const GridFunction& f, int k) {
  if (k < 1) throw InvalidArgument("whitney_projection: order must be >= 1");
  if (f.points_per_axis() < k) throw InvalidArgument("whitney_projection: need at least k points per axis");
  const auto alphas = whitney_enumeration(f.dim(), k);
  GridFunction g = f;
  for (auto it = alphas.rbegin(); it != alphas.rend(); ++it) g = mixed_projection(g, *it);
  return g;
}

WhitneyCertificate whitney_certificate(const GridFunction& f, const LatticeCube& q, int k) {
  WhitneyCertificate c;
  c.e_k = local_approximation(f, q, k);
  c.osc_k = osc_k(f, q, k);
  double scale = 0.0;
  for (const auto& p : cube_points(q)) scale = std::max(scale, std::abs(f(p)));
  const double tol = 1e-12 + 1e-10 * scale;
  const double bound = std::ldexp(c.e_k, k);
  c.lower_bound_slack = bound - c.osc_k;
  c.lower_bound_holds = c.osc_k <= bound + tol;
  if (c.e_k > 1e-9) c.ratio = c.osc_k / c.e_k;
  return c;
}

}  // namespace latvar
