#pragma once

// Slow reference implementations used only by the tests. They share nothing
// with the library beyond GridFunction / LatticeCube storage.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "latvar/grid.hpp"

namespace oracle {

using latvar::GridFunction;
using latvar::LatticeCube;
using latvar::LatticePoint;

inline std::vector<LatticePoint> points_of(const LatticeCube& q) {
  std::vector<LatticePoint> out;
  LatticePoint p = q.origin;
  for (;;) {
    out.push_back(p);
    int a = static_cast<int>(p.size()) - 1;
    while (a >= 0 && p[static_cast<std::size_t>(a)] == q.origin[static_cast<std::size_t>(a)] + q.side) {
      p[static_cast<std::size_t>(a)] = q.origin[static_cast<std::size_t>(a)];
      --a;
    }
    if (a < 0) return out;
    ++p[static_cast<std::size_t>(a)];
  }
}

inline double binom(int k, int j) {
  double r = 1;
  for (int i = 1; i <= j; ++i) r = r * (k - j + i) / i;
  return r;
}

/// Every x in Q and every integer step h != 0 with x + k h in Q.
inline double osc(const GridFunction& f, const LatticeCube& q, int k) {
  const int d = q.dim();
  double best = 0.0;
  std::vector<int> h(static_cast<std::size_t>(d));
  std::function<void(int)> steps = [&](int axis) {
    if (axis == d) {
      if (std::all_of(h.begin(), h.end(), [](int v) { return v == 0; })) return;
      for (const auto& x : points_of(q)) {
        double s = 0.0;
        bool inside = true;
        for (int j = 0; j <= k && inside; ++j) {
          LatticePoint y = x;
          for (int i = 0; i < d; ++i) {
            y[static_cast<std::size_t>(i)] += j * h[static_cast<std::size_t>(i)];
            inside = inside && q.contains(y);
          }
          if (inside) s += ((k - j) % 2 ? -1.0 : 1.0) * binom(k, j) * f(y);
        }
        if (inside) best = std::max(best, std::abs(s));
      }
      return;
    }
    for (int v = -q.side; v <= q.side; ++v) {
      h[static_cast<std::size_t>(axis)] = v;
      steps(axis + 1);
    }
  };
  steps(0);
  return best;
}

inline std::vector<std::vector<int>> exponents(int d, int max_degree) {
  std::vector<std::vector<int>> out;
  std::vector<int> e(static_cast<std::size_t>(d), 0);
  std::function<void(int, int)> rec = [&](int axis, int left) {
    if (axis == d) {
      out.push_back(e);
      return;
    }
    for (int v = 0; v <= left; ++v) {
      e[static_cast<std::size_t>(axis)] = v;
      rec(axis + 1, left - v);
    }
  };
  if (max_degree >= 0) rec(0, max_degree);
  return out;
}

/// Best uniform error by polynomials of degree <= k - 1 on Q: the maximum
/// over point subsets S with a one-dimensional space of annihilating weights
/// w of |f.w| / |w|_1 (global monomials, SVD null space).
inline double minimax(const GridFunction& f, const LatticeCube& q, int k) {
  const auto pts = points_of(q);
  const auto ex = exponents(q.dim(), k - 1);
  const int m = static_cast<int>(ex.size());
  const int np = static_cast<int>(pts.size());
  if (m == 0) {
    double s = 0;
    for (const auto& p : pts) s = std::max(s, std::abs(f(p)));
    return s;
  }
  auto mono = [&](const LatticePoint& p, const std::vector<int>& e) {
    double v = 1.0;
    for (std::size_t i = 0; i < p.size(); ++i) v *= std::pow(static_cast<double>(p[i]) / (f.points_per_axis() - 1), e[i]);
    return v;
  };
  double best = 0.0;
  std::vector<int> pick;
  std::function<void(int)> rec = [&](int start) {
    const int sz = static_cast<int>(pick.size());
    if (sz >= 2) {
      Eigen::MatrixXd a(m, sz);
      for (int c = 0; c < sz; ++c)
        for (int r = 0; r < m; ++r) a(r, c) = mono(pts[static_cast<std::size_t>(pick[static_cast<std::size_t>(c)])], ex[static_cast<std::size_t>(r)]);
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
      const auto& sv = svd.singularValues();
      int rank = 0;
      for (int i = 0; i < sv.size(); ++i)
        if (sv[i] > 1e-10 * std::max(1.0, sv[0])) ++rank;
      if (sz - rank == 1) {
        const Eigen::VectorXd w = svd.matrixV().col(sz - 1);
        double dot = 0.0;
        for (int c = 0; c < sz; ++c) dot += w[c] * f(pts[static_cast<std::size_t>(pick[static_cast<std::size_t>(c)])]);
        best = std::max(best, std::abs(dot) / w.cwiseAbs().sum());
      }
    }
    if (sz == m + 1) return;
    for (int i = start; i < np; ++i) {
      pick.push_back(i);
      rec(i + 1);
      pick.pop_back();
    }
  };
  rec(0);
  return best;
}

inline bool interiors_disjoint(const LatticeCube& a, const LatticeCube& b) {
  for (std::size_t i = 0; i < a.origin.size(); ++i)
    if (a.origin[i] + a.side <= b.origin[i] || b.origin[i] + b.side <= a.origin[i]) return true;
  return false;
}

inline std::vector<LatticeCube> cubes(int d, int n) {
  std::vector<LatticeCube> out;
  for (int s = 1; s < n; ++s) {
    LatticeCube box{LatticePoint(static_cast<std::size_t>(d), 0), n - 1 - s};
    for (const auto& o : points_of(box)) out.push_back(LatticeCube{o, s});
  }
  return out;
}

/// Every packing as a list of indices into cubes(d, n).
inline std::vector<std::vector<std::size_t>> packings(int d, int n) {
  const auto cs = cubes(d, n);
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> cur;
  std::function<void(std::size_t)> rec = [&](std::size_t start) {
    out.push_back(cur);
    for (std::size_t i = start; i < cs.size(); ++i) {
      bool ok = true;
      for (auto j : cur) ok = ok && interiors_disjoint(cs[i], cs[j]);
      if (!ok) continue;
      cur.push_back(i);
      rec(i + 1);
      cur.pop_back();
    }
  };
  rec(0);
  return out;
}

/// max over packings of (sum w(Q)^p)^(1/p).
inline double variation(const GridFunction& f, double p, const std::function<double(const LatticeCube&)>& weight) {
  const auto cs = cubes(f.dim(), f.points_per_axis());
  std::vector<double> w(cs.size());
  for (std::size_t i = 0; i < cs.size(); ++i) w[i] = std::pow(weight(cs[i]), p);
  double best = 0.0;
  for (const auto& pk : packings(f.dim(), f.points_per_axis())) {
    double s = 0.0;
    for (auto i : pk) s += w[i];
    best = std::max(best, s);
  }
  return std::pow(best, 1.0 / p);
}

}  // namespace oracle
