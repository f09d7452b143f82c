#include "latvar/variation.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <sstream>

#include "latvar/differences.hpp"
#include "latvar/local_approx.hpp"

namespace latvar {

void VariationParams::validate() const {
  if (k < 1) throw InvalidArgument("variation: order k must be >= 1");
  if (!(p >= 1.0) || !std::isfinite(p)) throw InvalidArgument("variation: exponent p must satisfy 1 <= p < inf");
}

std::string to_string(WeightKind w) { return w == WeightKind::E_k ? "E_k" : "osc_k"; }

std::string to_string(VariationMethod m) {
  switch (m) {
    case VariationMethod::brute: return "brute";
    case VariationMethod::dyadic: return "dyadic";
    case VariationMethod::local_search: return "local_search";
  }
  return "unknown";
}

WeightKind weight_from_string(const std::string& s) {
  if (s == "E_k" || s == "E" || s == "e_k" || s == "approx") return WeightKind::E_k;
  if (s == "osc_k" || s == "osc") return WeightKind::osc_k;
  throw InvalidArgument("unknown weight '" + s + "' (expected E_k or osc_k)");
}

double cube_weight(const GridFunction& f, const LatticeCube& q, const VariationParams& params) {
  return params.weight == WeightKind::E_k ? local_approximation(f, q, params.k) : osc_k(f, q, params.k);
}

double packing_objective(const GridFunction& f, const Packing& pi, const VariationParams& params) {
  params.validate();
  for (const auto& q : pi.cubes)
    if (!q.fits(f.dim(), f.points_per_axis()))
      throw InvalidArgument("packing_objective: " + to_string(q) + " is not inside the grid");
  if (!is_packing(pi)) throw InvalidArgument("packing_objective: cubes overlap");
  double s = 0.0;
  for (const auto& q : pi.cubes) s += std::pow(cube_weight(f, q, params), params.p);
  return std::pow(s, 1.0 / params.p);
}

bool is_dyadic_grid(int n) {
  const int m = n - 1;
  return m >= 1 && (m & (m - 1)) == 0;
}

namespace {

// Cubes of the grid with lazily computed powered weights w^p, restricted to
// an admissible subset.
class CubeTable {
 public:
  CubeTable(const GridFunction& f, const VariationParams& params, std::function<bool(const LatticeCube&)> admissible)
      : f_(f), params_(params), n_(f.points_per_axis()), cells_(cell_count(f.dim(), n_)) {
    params_.validate();
    for (auto& q : enumerate_cubes(f)) {
      if (admissible && !admissible(q)) continue;
      index_.emplace(q, cubes_.size());
      masks_.push_back(cells_of(q, n_));
      cubes_.push_back(std::move(q));
    }
    wp_.assign(cubes_.size(), -1.0);
  }

  std::size_t size() const { return cubes_.size(); }
  std::size_t cells() const { return cells_; }
  int n() const { return n_; }
  const LatticeCube& cube(std::size_t i) const { return cubes_[i]; }
  const CellSet& mask(std::size_t i) const { return masks_[i]; }

  double powered(std::size_t i) {
    if (wp_[i] < 0.0) wp_[i] = std::pow(cube_weight(f_, cubes_[i], params_), params_.p);
    return wp_[i];
  }

  std::optional<std::size_t> find(const LatticeCube& q) const {
    auto it = index_.find(q);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  std::size_t origin_cell(std::size_t i) const {
    std::size_t lin = 0;
    for (int o : cubes_[i].origin) lin = lin * static_cast<std::size_t>(n_ - 1) + static_cast<std::size_t>(o);
    return lin;
  }

 private:
  const GridFunction& f_;
  VariationParams params_;
  int n_;
  std::size_t cells_;
  std::vector<LatticeCube> cubes_;
  std::vector<CellSet> masks_;
  std::vector<double> wp_;
  std::map<LatticeCube, std::size_t> index_;
};

double tie_tol(double v) { return 1e-14 * std::max(1.0, std::abs(v)); }

// Fewer cubes first, then lexicographic on the (sorted) cube lists.
bool preferred(const std::vector<LatticeCube>& a, const std::vector<LatticeCube>& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

Packing sorted_packing(std::vector<LatticeCube> cubes) {
  std::sort(cubes.begin(), cubes.end());
  return Packing{std::move(cubes)};
}

VariationResult finish(const GridFunction& f, const VariationParams& params, Packing pi, VariationMethod method,
                       bool exact) {
  VariationResult r;
  r.optimizer = sorted_packing(std::move(pi.cubes));
  r.value = packing_objective(f, r.optimizer, params);
  r.method = method;
  r.is_exact = exact;
  return r;
}

// Branch and bound over packings: the lowest undecided cell is either left
// empty or becomes the origin cell of a cube. Zero-weight cubes are skipped
// since they never belong to a preferred optimizer.
class ExactSearch {
 public:
  ExactSearch(CubeTable& table, std::int64_t cell_budget) : t_(table), budget_(cell_budget) {
    by_origin_.resize(t_.cells());
    cell_bound_.assign(t_.cells(), 0.0);
    for (std::size_t i = 0; i < t_.size(); ++i) {
      const double w = t_.powered(i);
      if (!(w > 0.0)) continue;
      by_origin_[t_.origin_cell(i)].push_back(i);
      const double per_cell = w / static_cast<double>(t_.cube(i).cell_count());
      for (std::size_t c = 0; c < t_.cells(); ++c)
        if (t_.mask(i).test(c)) cell_bound_[c] = std::max(cell_bound_[c], per_cell);
    }
  }

  std::vector<LatticeCube> run() {
    CellSet occ(t_.cells());
    dfs(0, occ, 0.0, 0);
    return best_list_;
  }

 private:
  void dfs(std::size_t cell, CellSet& occ, double sum, std::int64_t used) {
    while (cell < t_.cells() && occ.test(cell)) ++cell;
    if (cell == t_.cells()) {
      consider(sum);
      return;
    }
    double bound = sum;
    for (std::size_t c = cell; c < t_.cells(); ++c)
      if (!occ.test(c)) bound += cell_bound_[c];
    if (have_best_) {
      if (bound < best_ - tie_tol(best_)) return;
      if (bound <= best_ + tie_tol(best_) && chosen_.size() > best_list_.size()) return;
    }
    // Larger cubes first: coarse optima are found early and prune ties.
    for (auto it = by_origin_[cell].rbegin(); it != by_origin_[cell].rend(); ++it) {
      const std::size_t i = *it;
      const auto cnt = t_.cube(i).cell_count();
      if (budget_ >= 0 && used + cnt > budget_) continue;
      if (occ.intersects(t_.mask(i))) continue;
      occ |= t_.mask(i);
      chosen_.push_back(t_.cube(i));
      dfs(cell + 1, occ, sum + t_.powered(i), used + cnt);
      chosen_.pop_back();
      occ.remove(t_.mask(i));
    }
    dfs(cell + 1, occ, sum, used);
  }

  void consider(double sum) {
    if (!have_best_ || sum > best_ + tie_tol(best_)) {
      have_best_ = true;
      best_ = sum;
      best_list_ = chosen_;
    } else if (sum >= best_ - tie_tol(best_) && preferred(chosen_, best_list_)) {
      best_list_ = chosen_;
    }
  }

  CubeTable& t_;
  std::int64_t budget_;
  std::vector<std::vector<std::size_t>> by_origin_;
  std::vector<double> cell_bound_;
  std::vector<LatticeCube> chosen_;
  std::vector<LatticeCube> best_list_;
  double best_ = 0.0;
  bool have_best_ = false;
};

Packing dyadic_packing(const GridFunction& f, CubeTable& table) {
  const int d = f.dim();
  const int n = f.points_per_axis();
  // Returns best powered sum on q and appends the chosen cubes to out.
  std::function<double(const LatticeCube&, std::vector<LatticeCube>&)> best =
      [&](const LatticeCube& q, std::vector<LatticeCube>& out) -> double {
    const auto idx = table.find(q);
    const double own = idx ? table.powered(*idx) : 0.0;
    if (q.side == 1) {
      if (own > 0.0) out.push_back(q);
      return own;
    }
    const int h = q.side / 2;
    std::vector<LatticeCube> kids;
    double sum = 0.0;
    for (int mask = 0; mask < (1 << d); ++mask) {
      LatticeCube c{q.origin, h};
      for (int a = 0; a < d; ++a)
        if (mask & (1 << (d - 1 - a))) c.origin[static_cast<std::size_t>(a)] += h;
      sum += best(c, kids);
    }
    if (own > 0.0 && own > sum + tie_tol(sum)) {
      out.push_back(q);
      return own;
    }
    out.insert(out.end(), kids.begin(), kids.end());
    return sum;
  };
  std::vector<LatticeCube> chosen;
  best(LatticeCube{LatticePoint(static_cast<std::size_t>(d), 0), n - 1}, chosen);
  return Packing{std::move(chosen)};
}

struct LocalState {
  std::vector<std::size_t> chosen;
  CellSet occ;
  double sum = 0.0;
  std::int64_t used = 0;
};

Packing local_search(CubeTable& t, LocalState st, int budget, std::int64_t cell_budget) {
  const auto fits_budget = [&](std::int64_t extra) { return cell_budget < 0 || st.used + extra <= cell_budget; };
  const auto improves = [&](double candidate) { return candidate > st.sum + tie_tol(st.sum); };
  const int d = t.size() ? t.cube(0).dim() : 1;

  auto greedy_fill = [&](LocalState& s) {
    for (;;) {
      std::optional<std::size_t> pick;
      double pick_w = 0.0;
      for (std::size_t i = 0; i < t.size(); ++i) {
        if (s.occ.intersects(t.mask(i))) continue;
        if (cell_budget >= 0 && s.used + t.cube(i).cell_count() > cell_budget) continue;
        const double w = t.powered(i);
        if (w > pick_w) {
          pick_w = w;
          pick = i;
        }
      }
      if (!pick) return;
      s.chosen.push_back(*pick);
      s.occ |= t.mask(*pick);
      s.sum += pick_w;
      s.used += t.cube(*pick).cell_count();
    }
  };

  auto try_resize = [&](std::size_t j, int delta) -> bool {
    const std::size_t cur = st.chosen[j];
    const LatticeCube& q = t.cube(cur);
    if (q.side + delta < 1) return false;
    CellSet rest = st.occ;
    rest.remove(t.mask(cur));
    for (int corner = 0; corner < (1 << d); ++corner) {
      LatticeCube r{q.origin, q.side + delta};
      for (int a = 0; a < d; ++a)
        if (corner & (1 << (d - 1 - a))) r.origin[static_cast<std::size_t>(a)] -= delta;
      const auto idx = t.find(r);
      if (!idx || rest.intersects(t.mask(*idx))) continue;
      const std::int64_t diff = t.cube(*idx).cell_count() - q.cell_count();
      if (!fits_budget(diff)) continue;
      const double cand = st.sum - t.powered(cur) + t.powered(*idx);
      if (!improves(cand)) continue;
      rest |= t.mask(*idx);
      st.occ = rest;
      st.chosen[j] = *idx;
      st.sum = cand;
      st.used += diff;
      return true;
    }
    return false;
  };

  for (int step = 0; step < budget; ++step) {
    bool moved = false;
    // add
    for (std::size_t i = 0; i < t.size() && !moved; ++i) {
      if (st.occ.intersects(t.mask(i)) || !fits_budget(t.cube(i).cell_count())) continue;
      const double w = t.powered(i);
      if (!improves(st.sum + w)) continue;
      st.chosen.push_back(i);
      st.occ |= t.mask(i);
      st.sum += w;
      st.used += t.cube(i).cell_count();
      moved = true;
    }
    // remove
    for (std::size_t j = 0; j < st.chosen.size() && !moved; ++j) {
      const std::size_t i = st.chosen[j];
      if (!improves(st.sum - t.powered(i))) continue;
      st.occ.remove(t.mask(i));
      st.sum -= t.powered(i);
      st.used -= t.cube(i).cell_count();
      st.chosen.erase(st.chosen.begin() + static_cast<std::ptrdiff_t>(j));
      moved = true;
    }
    // replace: drop one cube, refill greedily
    for (std::size_t j = 0; j < st.chosen.size() && !moved; ++j) {
      LocalState trial = st;
      const std::size_t i = trial.chosen[j];
      trial.chosen.erase(trial.chosen.begin() + static_cast<std::ptrdiff_t>(j));
      trial.occ.remove(t.mask(i));
      trial.sum -= t.powered(i);
      trial.used -= t.cube(i).cell_count();
      greedy_fill(trial);
      if (!improves(trial.sum)) continue;
      st = std::move(trial);
      moved = true;
    }
    // grow, then shrink
    for (std::size_t j = 0; j < st.chosen.size() && !moved; ++j) moved = try_resize(j, 1);
    for (std::size_t j = 0; j < st.chosen.size() && !moved; ++j) moved = try_resize(j, -1);
    if (!moved) break;
  }

  std::vector<LatticeCube> cubes;
  for (std::size_t i : st.chosen)
    if (t.powered(i) > 0.0) cubes.push_back(t.cube(i));
  return Packing{std::move(cubes)};
}

LocalState seed_state(CubeTable& t, const Packing& seed, const char* who) {
  LocalState st;
  st.occ = CellSet(t.cells());
  for (const auto& q : seed.cubes) {
    const auto idx = t.find(q);
    if (!idx) throw InvalidArgument(std::string(who) + ": seed cube " + to_string(q) + " is not admissible");
    if (st.occ.intersects(t.mask(*idx))) throw InvalidArgument(std::string(who) + ": seed is not a packing");
    st.occ |= t.mask(*idx);
    st.chosen.push_back(*idx);
    st.sum += t.powered(*idx);
    st.used += q.cell_count();
  }
  return st;
}

bool within_guard(int d, int n, bool allow_large) {
  const std::size_t cells = cell_count(d, n);
  return cells <= (allow_large ? kExhaustiveCellCeiling : kExhaustiveCellGuard);
}

}  // namespace

VariationResult variation_bruteforce(const GridFunction& f, const VariationParams& params, bool allow_large) {
  check_exhaustive_guard(f.dim(), f.points_per_axis(), allow_large, "variation_bruteforce");
  CubeTable table(f, params, nullptr);
  ExactSearch search(table, -1);
  return finish(f, params, Packing{search.run()}, VariationMethod::brute, true);
}

VariationResult variation_bruteforce_region(const GridFunction& f, const VariationParams& params,
                                            const LatticeInterval& region, bool allow_large) {
  check_exhaustive_guard(f.dim(), f.points_per_axis(), allow_large, "variation_bruteforce_region");
  if (region.dim() != f.dim()) throw InvalidArgument("variation_bruteforce_region: region dimension mismatch");
  CubeTable table(f, params, [&](const LatticeCube& q) {
    for (std::size_t i = 0; i < q.origin.size(); ++i)
      if (q.origin[i] < region.lower[i] || q.origin[i] + q.side > region.upper[i]) return false;
    return true;
  });
  ExactSearch search(table, -1);
  return finish(f, params, Packing{search.run()}, VariationMethod::brute, true);
}

VariationResult variation_dyadic(const GridFunction& f, const VariationParams& params) {
  if (!is_dyadic_grid(f.points_per_axis())) {
    std::ostringstream os;
    os << "variation_dyadic: n - 1 = " << f.points_per_axis() - 1 << " is not a power of two";
    throw InvalidArgument(os.str());
  }
  CubeTable table(f, params, nullptr);
  return finish(f, params, dyadic_packing(f, table), VariationMethod::dyadic, false);
}

VariationResult variation_local_search(const GridFunction& f, const VariationParams& params, const Packing& seed,
                                       int budget) {
  if (budget < 0) throw InvalidArgument("variation_local_search: budget must be >= 0");
  CubeTable table(f, params, nullptr);
  LocalState st = seed_state(table, seed, "variation_local_search");
  if (budget == 0) return finish(f, params, seed, VariationMethod::local_search, false);
  return finish(f, params, local_search(table, std::move(st), budget, -1), VariationMethod::local_search, false);
}

VariationResult restricted_variation_detailed(const GridFunction& f, const VariationParams& params, double mesh_cap,
                                              bool allow_large) {
  if (!(mesh_cap > 0.0)) throw InvalidArgument("restricted_variation: mesh_cap must be positive");
  const int n = f.points_per_axis();
  CubeTable table(f, params, [&](const LatticeCube& q) { return q.volume(n) <= mesh_cap * (1.0 + 1e-12); });
  if (within_guard(f.dim(), n, allow_large)) {
    ExactSearch search(table, -1);
    return finish(f, params, Packing{search.run()}, VariationMethod::brute, true);
  }
  Packing seed = is_dyadic_grid(n) ? dyadic_packing(f, table) : Packing{};
  LocalState st = seed_state(table, seed, "restricted_variation");
  return finish(f, params, local_search(table, std::move(st), 1000, -1), VariationMethod::local_search, false);
}

double restricted_variation(const GridFunction& f, const VariationParams& params, double mesh_cap) {
  return restricted_variation_detailed(f, params, mesh_cap).value;
}

VariationResult ac_modulus_detailed(const GridFunction& f, const VariationParams& params, double volume_cap,
                                    bool allow_large) {
  if (!(volume_cap > 0.0)) throw InvalidArgument("ac_modulus: volume_cap must be positive");
  const int n = f.points_per_axis();
  const double total = static_cast<double>(cell_count(f.dim(), n));
  const auto cell_budget = static_cast<std::int64_t>(std::floor(volume_cap * total + 1e-9));
  CubeTable table(f, params, [&](const LatticeCube& q) { return q.cell_count() <= cell_budget; });
  if (within_guard(f.dim(), n, allow_large)) {
    ExactSearch search(table, cell_budget);
    return finish(f, params, Packing{search.run()}, VariationMethod::brute, true);
  }
  LocalState st = seed_state(table, Packing{}, "ac_modulus");
  return finish(f, params, local_search(table, std::move(st), 1000, cell_budget), VariationMethod::local_search,
                false);
}

double ac_modulus(const GridFunction& f, const VariationParams& params, double volume_cap) {
  return ac_modulus_detailed(f, params, volume_cap).value;
}

}  // namespace latvar
