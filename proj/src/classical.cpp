#include "latvar/classical.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "latvar/differences.hpp"

namespace latvar {

std::string to_string(VitaliMethod m) {
  switch (m) {
    case VitaliMethod::brute: return "brute";
    case VitaliMethod::grid_partition: return "grid_partition";
    case VitaliMethod::local_search: return "local_search";
  }
  return "unknown";
}

double vitali_deviation(const GridFunction& f, const LatticeInterval& interval) {
  const int d = f.dim();
  if (interval.dim() != d) throw InvalidArgument("vitali_deviation: interval dimension mismatch");
  for (int a = 0; a < d; ++a) {
    const auto i = static_cast<std::size_t>(a);
    if (interval.lower[i] < 0 || interval.upper[i] > f.points_per_axis() - 1 || interval.lower[i] > interval.upper[i])
      throw InvalidArgument("vitali_deviation: interval outside the grid");
  }
  if (!interval.is_nontrivial()) throw InvalidArgument("vitali_deviation: interval is degenerate on every axis");
  if (!interval.is_full_dimensional()) return 0.0;
  CompensatedSum s;
  LatticePoint x(static_cast<std::size_t>(d));
  for (int corner = 0; corner < (1 << d); ++corner) {
    int lowers = 0;
    for (int a = 0; a < d; ++a) {
      const bool low = corner & (1 << (d - 1 - a));
      x[static_cast<std::size_t>(a)] = low ? interval.lower[static_cast<std::size_t>(a)]
                                           : interval.upper[static_cast<std::size_t>(a)];
      lowers += low;
    }
    s.add((lowers % 2 ? -1.0 : 1.0) * f(x));
  }
  return s.value();
}

namespace {

struct Box {
  LatticeInterval interval;
  CellSet mask;
  std::int64_t cells;
  double dev;
};

std::vector<std::vector<Box>> boxes_by_cell(const GridFunction& f) {
  const int d = f.dim();
  const int m = f.points_per_axis() - 1;
  const std::size_t cells = cell_count(d, f.points_per_axis());
  std::vector<std::vector<Box>> out(cells);
  for (std::size_t c = 0; c < cells; ++c) {
    LatticePoint lo(static_cast<std::size_t>(d));
    std::size_t rem = c;
    for (int a = d - 1; a >= 0; --a) {
      lo[static_cast<std::size_t>(a)] = static_cast<int>(rem % static_cast<std::size_t>(m));
      rem /= static_cast<std::size_t>(m);
    }
    LatticePoint hi = lo;
    for (auto& h : hi) h += 1;
    for (;;) {
      LatticeInterval iv{lo, hi};
      std::int64_t cnt = 1;
      for (int a = 0; a < d; ++a) cnt *= hi[static_cast<std::size_t>(a)] - lo[static_cast<std::size_t>(a)];
      out[c].push_back(Box{iv, cells_of(iv, f.points_per_axis()), cnt, std::abs(vitali_deviation(f, iv))});
      int a = d - 1;
      while (a >= 0 && hi[static_cast<std::size_t>(a)] == m) {
        hi[static_cast<std::size_t>(a)] = lo[static_cast<std::size_t>(a)] + 1;
        --a;
      }
      if (a < 0) break;
      ++hi[static_cast<std::size_t>(a)];
    }
    // Large boxes first: the coarsest optimum is found early and prunes ties.
    std::stable_sort(out[c].begin(), out[c].end(), [](const Box& x, const Box& y) { return x.cells > y.cells; });
  }
  return out;
}

double tie_tol(double v) { return 1e-14 * std::max(1.0, std::abs(v)); }

bool preferred(const std::vector<LatticeInterval>& a, const std::vector<LatticeInterval>& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

class VitaliSearch {
 public:
  explicit VitaliSearch(const GridFunction& f) : boxes_(boxes_by_cell(f)), cells_(boxes_.size()) {
    unit_.resize(cells_);
    for (std::size_t c = 0; c < cells_; ++c)
      for (const auto& b : boxes_[c])
        if (b.cells == 1) unit_[c] = b.dev;
  }

  std::vector<LatticeInterval> run() {
    CellSet occ(cells_);
    dfs(0, occ, 0.0);
    std::sort(best_list_.begin(), best_list_.end());
    return best_list_;
  }

 private:
  void dfs(std::size_t cell, CellSet& occ, double sum) {
    while (cell < cells_ && occ.test(cell)) ++cell;
    if (cell == cells_) {
      consider(sum);
      return;
    }
    double bound = sum;
    for (std::size_t c = cell; c < cells_; ++c)
      if (!occ.test(c)) bound += unit_[c];
    if (have_best_) {
      if (bound < best_ - tie_tol(best_)) return;
      if (bound <= best_ + tie_tol(best_) && chosen_.size() > best_list_.size()) return;
    }
    for (const auto& b : boxes_[cell]) {
      if (!(b.dev > 0.0) || occ.intersects(b.mask)) continue;
      occ |= b.mask;
      chosen_.push_back(b.interval);
      dfs(cell + 1, occ, sum + b.dev);
      chosen_.pop_back();
      occ.remove(b.mask);
    }
    dfs(cell + 1, occ, sum);
  }

  void consider(double sum) {
    auto sorted = chosen_;
    std::sort(sorted.begin(), sorted.end());
    if (!have_best_ || sum > best_ + tie_tol(best_)) {
      have_best_ = true;
      best_ = sum;
      best_list_ = std::move(sorted);
    } else if (sum >= best_ - tie_tol(best_) && preferred(sorted, best_list_)) {
      best_list_ = std::move(sorted);
    }
  }

  std::vector<std::vector<Box>> boxes_;
  std::size_t cells_;
  std::vector<double> unit_;
  std::vector<LatticeInterval> chosen_;
  std::vector<LatticeInterval> best_list_;
  double best_ = 0.0;
  bool have_best_ = false;
};

std::vector<LatticeInterval> vitali_local_search(const GridFunction& f, int budget) {
  std::vector<Box> all;
  for (auto& group : boxes_by_cell(f))
    for (auto& b : group) all.push_back(std::move(b));
  const std::size_t cells = cell_count(f.dim(), f.points_per_axis());
  std::vector<std::size_t> chosen;
  CellSet occ(cells);
  double sum = 0.0;

  auto greedy = [&](std::vector<std::size_t>& ch, CellSet& oc, double& s) {
    for (;;) {
      std::optional<std::size_t> pick;
      for (std::size_t i = 0; i < all.size(); ++i)
        if (all[i].dev > 0.0 && !oc.intersects(all[i].mask) && (!pick || all[i].dev > all[*pick].dev)) pick = i;
      if (!pick) return;
      ch.push_back(*pick);
      oc |= all[*pick].mask;
      s += all[*pick].dev;
    }
  };

  for (int step = 0; step < budget; ++step) {
    bool moved = false;
    for (std::size_t i = 0; i < all.size() && !moved; ++i) {
      if (!(all[i].dev > tie_tol(sum)) || occ.intersects(all[i].mask)) continue;
      chosen.push_back(i);
      occ |= all[i].mask;
      sum += all[i].dev;
      moved = true;
    }
    for (std::size_t j = 0; j < chosen.size() && !moved; ++j) {
      auto ch = chosen;
      CellSet oc = occ;
      double s = sum - all[ch[j]].dev;
      oc.remove(all[ch[j]].mask);
      ch.erase(ch.begin() + static_cast<std::ptrdiff_t>(j));
      greedy(ch, oc, s);
      if (s > sum + tie_tol(sum)) {
        chosen = std::move(ch);
        occ = oc;
        sum = s;
        moved = true;
      }
    }
    if (!moved) break;
  }
  std::vector<LatticeInterval> out;
  for (std::size_t i : chosen) out.push_back(all[i].interval);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

IntervalVariationResult vitali_variation(const GridFunction& f, VitaliMethod method, bool allow_large, int budget) {
  IntervalVariationResult r;
  r.method = method;
  const int d = f.dim();
  const int n = f.points_per_axis();
  switch (method) {
    case VitaliMethod::brute: {
      check_exhaustive_guard(d, n, allow_large, "vitali_variation");
      r.optimizer = VitaliSearch(f).run();
      r.is_exact = true;
      break;
    }
    case VitaliMethod::grid_partition: {
      for (const auto& group : boxes_by_cell(f))
        for (const auto& b : group)
          if (b.cells == 1 && b.dev > 0.0) r.optimizer.push_back(b.interval);
      r.is_exact = true;
      break;
    }
    case VitaliMethod::local_search: {
      if (budget < 0) throw InvalidArgument("vitali_variation: budget must be >= 0");
      r.optimizer = vitali_local_search(f, budget);
      r.is_exact = false;
      break;
    }
  }
  CompensatedSum s;
  for (const auto& iv : r.optimizer) s.add(std::abs(vitali_deviation(f, iv)));
  r.value = s.value();
  return r;
}

LatticePoint default_anchor(int d, int n) { return LatticePoint(static_cast<std::size_t>(d), n - 1); }

GridFunction partial_function(const GridFunction& f, const LatticePoint& anchor, const AxisSubset& omega) {
  const int d = f.dim();
  const int n = f.points_per_axis();
  if (static_cast<int>(anchor.size()) != d || !f.contains(anchor))
    throw InvalidArgument("partial_function: anchor is not a lattice point of the grid");
  make_axis_subset(omega.axes, d);  // validates
  const int m = static_cast<int>(omega.axes.size());
  std::size_t total = 1;
  for (int i = 0; i < m; ++i) total *= static_cast<std::size_t>(n);
  Eigen::VectorXd v(static_cast<Eigen::Index>(total));
  LatticePoint x = anchor;
  for (std::size_t lin = 0; lin < total; ++lin) {
    std::size_t rem = lin;
    for (int j = m - 1; j >= 0; --j) {
      x[static_cast<std::size_t>(omega.axes[static_cast<std::size_t>(j)])] =
          static_cast<int>(rem % static_cast<std::size_t>(n));
      rem /= static_cast<std::size_t>(n);
    }
    v[static_cast<Eigen::Index>(lin)] = f(x);
  }
  return GridFunction(m, n, std::move(v));
}

double hardy_krause_variation(const GridFunction& f, std::optional<LatticePoint> anchor) {
  const int d = f.dim();
  const LatticePoint a = anchor ? *anchor : default_anchor(d, f.points_per_axis());
  CompensatedSum s;
  for (int mask = 1; mask < (1 << d); ++mask) {
    std::vector<int> axes;
    for (int i = 0; i < d; ++i)
      if (mask & (1 << i)) axes.push_back(i);
    s.add(vitali_variation(partial_function(f, a, AxisSubset{axes}), VitaliMethod::grid_partition).value);
  }
  return s.value();
}

double tonelli_variation(const GridFunction& f) {
  const int d = f.dim();
  const int n = f.points_per_axis();
  const std::size_t lines = f.size() / static_cast<std::size_t>(n);
  CompensatedSum total;
  for (int axis = 0; axis < d; ++axis) {
    const std::size_t stride = f.stride(axis);
    CompensatedSum axis_sum;
    for (std::size_t base = 0; base < f.size(); ++base) {
      if ((base / stride) % static_cast<std::size_t>(n) != 0) continue;
      for (int i = 1; i < n; ++i)
        axis_sum.add(std::abs(f[base + static_cast<std::size_t>(i) * stride] -
                              f[base + static_cast<std::size_t>(i - 1) * stride]));
    }
    total.add(axis_sum.value() / static_cast<double>(lines));
  }
  return total.value();
}

double jordan_variation(const GridFunction& f) {
  if (f.dim() != 1) throw InvalidArgument("jordan_variation: grid function must be one-dimensional");
  CompensatedSum s;
  for (std::size_t i = 1; i < f.size(); ++i) s.add(std::abs(f[i] - f[i - 1]));
  return s.value();
}

double wiener_variation(const GridFunction& f, double p) {
  if (f.dim() != 1) throw InvalidArgument("wiener_variation: grid function must be one-dimensional");
  if (!(p >= 1.0) || !std::isfinite(p)) throw InvalidArgument("wiener_variation: need 1 <= p < inf");
  const std::size_t n = f.size();
  std::vector<double> best(n, 0.0);
  for (std::size_t j = 1; j < n; ++j) {
    best[j] = best[j - 1];
    double hi = f[j], lo = f[j];
    for (std::size_t i = j; i-- > 0;) {
      hi = std::max(hi, f[i]);
      lo = std::min(lo, f[i]);
      best[j] = std::max(best[j], best[i] + std::pow(hi - lo, p));
    }
  }
  return std::pow(best[n - 1], 1.0 / p);
}

}  // namespace latvar
