#include "latvar/differences.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace latvar {

double binomial(int k, int j) {
  if (j < 0 || j > k) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= j; ++i) r = r * (k - j + i) / i;
  return std::round(r);
}

namespace {

std::vector<double> difference_coefficients(int k) {
  std::vector<double> c(static_cast<std::size_t>(k) + 1);
  for (int j = 0; j <= k; ++j) c[static_cast<std::size_t>(j)] = ((k - j) % 2 ? -1.0 : 1.0) * binomial(k, j);
  return c;
}

// Mixed difference kernel shared by the directional and mixed oscillations.
// Active axes carry (order, signed linear offset of one step); the remaining
// axes act as the identity. The j multi-index runs odometer-style with the
// last active axis fastest, so a single active axis sums j = 0..order.
struct ActiveAxis {
  int order;
  std::ptrdiff_t offset;
  const std::vector<double>* coeffs;
};

double mixed_difference(const GridFunction& f, std::ptrdiff_t base, const std::vector<ActiveAxis>& axes) {
  std::vector<int> j(axes.size(), 0);
  CompensatedSum sum;
  while (true) {
    double coef = 1.0;
    std::ptrdiff_t idx = base;
    for (std::size_t a = 0; a < axes.size(); ++a) {
      coef *= (*axes[a].coeffs)[static_cast<std::size_t>(j[a])];
      idx += j[a] * axes[a].offset;
    }
    sum.add(coef * f[static_cast<std::size_t>(idx)]);
    int a = static_cast<int>(axes.size()) - 1;
    for (; a >= 0; --a) {
      auto ua = static_cast<std::size_t>(a);
      if (j[ua] < axes[ua].order) {
        ++j[ua];
        break;
      }
      j[ua] = 0;
    }
    if (a < 0) break;
  }
  return sum.value();
}

void check_cube(const GridFunction& f, const LatticeCube& q, const char* who) {
  if (!q.fits(f.dim(), f.points_per_axis())) {
    std::ostringstream os;
    os << who << ": " << to_string(q) << " is not inside the grid";
    throw InvalidArgument(os.str());
  }
}

}  // namespace

double finite_difference(const GridFunction& f, const LatticePoint& x, const StepVector& h, int k) {
  if (k < 0) throw InvalidArgument("finite_difference: order must be >= 0");
  if (static_cast<int>(h.steps.size()) != f.dim() || static_cast<int>(x.size()) != f.dim())
    throw InvalidArgument("finite_difference: dimension mismatch");
  const auto coeffs = difference_coefficients(k);
  CompensatedSum sum;
  LatticePoint y = x;
  for (int j = 0; j <= k; ++j) {
    for (std::size_t a = 0; a < y.size(); ++a) y[a] = x[a] + j * h.steps[a];
    if (!f.contains(y)) throw InvalidArgument("finite_difference: x + j*h leaves the grid");
    sum.add(coeffs[static_cast<std::size_t>(j)] * f(y));
  }
  return sum.value();
}

double osc_k(const GridFunction& f, const LatticeCube& q, int k) {
  if (k < 1) throw InvalidArgument("osc_k: order must be >= 1");
  check_cube(f, q, "osc_k");
  const auto coeffs = difference_coefficients(k);
  const auto pts = cube_points(q);
  const int d = f.dim();
  std::vector<std::size_t> lin(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) lin[i] = f.linear_index(pts[i]);

  double best = 0.0;
  // Unordered pairs suffice: Delta_{-h}^k f(x + k h) = (-1)^k Delta_h^k f(x).
  for (std::size_t a = 0; a < pts.size(); ++a) {
    for (std::size_t b = a + 1; b < pts.size(); ++b) {
      std::ptrdiff_t offset = 0;
      bool ok = true;
      for (int ax = 0; ax < d && ok; ++ax) {
        const int diff = pts[b][static_cast<std::size_t>(ax)] - pts[a][static_cast<std::size_t>(ax)];
        if (diff % k != 0) ok = false;
        offset += static_cast<std::ptrdiff_t>(diff / k) * static_cast<std::ptrdiff_t>(f.stride(ax));
      }
      if (!ok) continue;
      CompensatedSum sum;
      for (int j = 0; j <= k; ++j)
        sum.add(coeffs[static_cast<std::size_t>(j)] *
                f[static_cast<std::size_t>(static_cast<std::ptrdiff_t>(lin[a]) + j * offset)]);
      best = std::max(best, std::abs(sum.value()));
    }
  }
  return best;
}

double osc_directional(const GridFunction& f, const LatticeCube& q, int k, int axis) {
  if (k < 1) throw InvalidArgument("osc_directional: order must be >= 1");
  if (axis < 0 || axis >= f.dim()) throw InvalidArgument("osc_directional: axis out of range");
  check_cube(f, q, "osc_directional");
  const auto coeffs = difference_coefficients(k);
  const auto ua = static_cast<std::size_t>(axis);
  const int end = q.origin[ua] + q.side;
  double best = 0.0;
  for (const auto& x : cube_points(q)) {
    const auto base = static_cast<std::ptrdiff_t>(f.linear_index(x));
    for (int m = 1; x[ua] + k * m <= end; ++m) {
      std::vector<ActiveAxis> axes{{k, m * static_cast<std::ptrdiff_t>(f.stride(axis)), &coeffs}};
      best = std::max(best, std::abs(mixed_difference(f, base, axes)));
    }
  }
  return best;
}

double osc_mixed(const GridFunction& f, const LatticeCube& q, const MultiIndex& alpha) {
  if (alpha.dim() != f.dim()) throw InvalidArgument("osc_mixed: multi-index dimension mismatch");
  if (std::any_of(alpha.entries.begin(), alpha.entries.end(), [](int a) { return a < 0; }))
    throw InvalidArgument("osc_mixed: negative multi-index entry");
  if (alpha.order() == 0) throw InvalidArgument("osc_mixed: multi-index must have a positive entry");
  check_cube(f, q, "osc_mixed");

  std::vector<int> active;
  std::vector<std::vector<double>> coeffs(static_cast<std::size_t>(f.dim()));
  for (int i = 0; i < f.dim(); ++i) {
    const int ai = alpha.entries[static_cast<std::size_t>(i)];
    if (ai > 0) {
      active.push_back(i);
      coeffs[static_cast<std::size_t>(i)] = difference_coefficients(ai);
    }
  }

  double best = 0.0;
  std::vector<ActiveAxis> axes(active.size());
  std::vector<int> steps(active.size());
  std::vector<int> max_steps(active.size());
  for (const auto& x : cube_points(q)) {
    bool feasible = true;
    for (std::size_t t = 0; t < active.size(); ++t) {
      const auto ax = static_cast<std::size_t>(active[t]);
      const int room = q.origin[ax] + q.side - x[ax];
      max_steps[t] = room / alpha.entries[ax];
      feasible = feasible && max_steps[t] >= 1;
      steps[t] = 1;
    }
    if (!feasible) continue;
    const auto base = static_cast<std::ptrdiff_t>(f.linear_index(x));
    while (true) {
      for (std::size_t t = 0; t < active.size(); ++t) {
        const auto ax = static_cast<std::size_t>(active[t]);
        axes[t] = ActiveAxis{alpha.entries[ax], steps[t] * static_cast<std::ptrdiff_t>(f.stride(active[t])), &coeffs[ax]};
      }
      best = std::max(best, std::abs(mixed_difference(f, base, axes)));
      int t = static_cast<int>(active.size()) - 1;
      for (; t >= 0; --t) {
        auto ut = static_cast<std::size_t>(t);
        if (steps[ut] < max_steps[ut]) {
          ++steps[ut];
          break;
        }
        steps[ut] = 1;
      }
      if (t < 0) break;
    }
  }
  return best;
}

}  // namespace latvar
