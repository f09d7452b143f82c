#include "latvar/suite.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <set>

#include <Eigen/Dense>

#include "latvar/classical.hpp"
#include "latvar/differences.hpp"
#include "latvar/families.hpp"
#include "latvar/grid_io.hpp"
#include "latvar/local_approx.hpp"
#include "latvar/multi_index.hpp"
#include "latvar/predual.hpp"
#include "latvar/random.hpp"
#include "latvar/variation.hpp"

namespace latvar {

using nlohmann::json;

// ============================================================================
// Config
// ============================================================================

SuiteConfig suite_config_from_json(const json& j) {
  if (!j.is_object()) throw InvalidArgument("suite config must be a JSON object");
  SuiteConfig c;
  static const std::set<std::string> known = {"schema_version", "invariants", "seeds",    "seed_start",
                                              "d",              "n",          "k",        "p",
                                              "fuzz",           "archive"};
  for (const auto& [key, value] : j.items())
    if (!known.count(key)) throw InvalidArgument("suite config: unknown key '" + key + "'");
  try {
    if (j.contains("invariants")) {
      const auto& inv = j.at("invariants");
      if (inv.is_string() && inv.get<std::string>() == "all")
        c.invariants.clear();
      else
        c.invariants = inv.get<std::vector<std::string>>();
    }
    if (j.contains("seeds")) c.seeds = j.at("seeds").get<int>();
    if (j.contains("seed_start")) c.seed_start = j.at("seed_start").get<std::uint64_t>();
    if (j.contains("d")) c.d_values = j.at("d").get<std::vector<int>>();
    if (j.contains("n")) c.n_values = j.at("n").get<std::vector<int>>();
    if (j.contains("k")) c.k_values = j.at("k").get<std::vector<int>>();
    if (j.contains("p")) c.p_values = j.at("p").get<std::vector<double>>();
    if (j.contains("fuzz")) c.fuzz = j.at("fuzz").get<bool>();
    if (j.contains("archive")) c.archive_path = j.at("archive").get<std::string>();
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("suite config: ") + e.what());
  }
  if (c.seeds < 0) throw InvalidArgument("suite config: seeds must be >= 0");
  if (c.d_values.empty() || c.n_values.empty() || c.k_values.empty() || c.p_values.empty())
    throw InvalidArgument("suite config: d, n, k and p lists must be nonempty");
  for (int d : c.d_values)
    if (d < 1 || d > 3) throw InvalidArgument("suite config: d must be in 1..3");
  for (int n : c.n_values)
    if (n < 2) throw InvalidArgument("suite config: n must be >= 2");
  for (int k : c.k_values)
    if (k < 1) throw InvalidArgument("suite config: k must be >= 1");
  for (double p : c.p_values)
    if (!(p >= 1.0) || !std::isfinite(p)) throw InvalidArgument("suite config: p must satisfy 1 <= p < inf");
  return c;
}

json suite_config_to_json(const SuiteConfig& c) {
  json j;
  j["invariants"] = c.invariants.empty() ? json("all") : json(c.invariants);
  j["seeds"] = c.seeds;
  j["seed_start"] = c.seed_start;
  j["d"] = c.d_values;
  j["n"] = c.n_values;
  j["k"] = c.k_values;
  j["p"] = c.p_values;
  j["fuzz"] = c.fuzz;
  if (!c.archive_path.empty()) j["archive"] = c.archive_path;
  return j;
}

// ============================================================================
// Helpers shared by the invariants
// ============================================================================

namespace {

std::mt19937_64 rng_for(const CellContext& c, std::uint64_t salt) {
  return std::mt19937_64(c.seed * 0x9e3779b97f4a7c15ull + salt * 0xbf58476d1ce4e5b9ull + 17);
}

FamilyParams family_params(const CellContext& c) {
  FamilyParams fp;
  fp.d = c.d;
  fp.n = c.n;
  fp.degree = c.k - 1;
  fp.exponent = c.d / c.p;
  return fp;
}

GridFunction gen(const CellContext& c, std::uint64_t salt = 0) {
  return generate(c.family, family_params(c), c.seed * 1000003ull + salt);
}

VariationParams vparams(const CellContext& c, WeightKind w = WeightKind::E_k) { return VariationParams{c.k, c.p, w}; }

LatticeCube random_cube(std::mt19937_64& rng, int d, int n, int min_side = 1, int max_side = -1) {
  if (max_side < 0 || max_side > n - 1) max_side = n - 1;
  min_side = std::min(min_side, max_side);
  const int side = uniform_int(rng, min_side, max_side);
  LatticeCube q{LatticePoint(static_cast<std::size_t>(d)), side};
  for (auto& o : q.origin) o = uniform_int(rng, 0, n - 1 - side);
  return q;
}

LatticeCube random_subcube(std::mt19937_64& rng, const LatticeCube& outer) {
  const int side = uniform_int(rng, 1, outer.side);
  LatticeCube q{outer.origin, side};
  for (auto& o : q.origin) o += uniform_int(rng, 0, outer.side - side);
  return q;
}

GridFunction scaled(const GridFunction& f, double a) {
  return GridFunction(f.dim(), f.points_per_axis(), a * f.values());
}

GridFunction added(const GridFunction& f, const GridFunction& g) {
  return GridFunction(f.dim(), f.points_per_axis(), f.values() + g.values());
}

CellOutcome bound(double lhs, double rhs, double tol, const std::string& what) {
  CellOutcome o;
  o.slack = rhs - lhs;
  o.status = lhs <= rhs + tol ? CellStatus::pass : CellStatus::fail;
  if (o.status == CellStatus::fail) o.detail = what + ": " + std::to_string(lhs) + " > " + std::to_string(rhs);
  return o;
}

CellOutcome equal(double a, double b, double tol, const std::string& what) {
  CellOutcome o;
  o.slack = tol - std::abs(a - b);
  o.status = std::abs(a - b) <= tol ? CellStatus::pass : CellStatus::fail;
  if (o.status == CellStatus::fail) o.detail = what + ": " + std::to_string(a) + " != " + std::to_string(b);
  return o;
}

CellOutcome skip(const std::string& why) {
  CellOutcome o;
  o.status = CellStatus::skip;
  o.detail = why;
  return o;
}

// Combines checks: first failure wins, slack is the minimum.
CellOutcome combine(std::initializer_list<CellOutcome> parts) {
  CellOutcome out;
  bool first = true;
  for (const auto& p : parts) {
    if (p.status == CellStatus::skip) continue;
    out.slack = first ? p.slack : std::min(out.slack, p.slack);
    first = false;
    if (p.status == CellStatus::fail && out.status != CellStatus::fail) {
      out.status = CellStatus::fail;
      out.detail = p.detail;
    }
  }
  return out;
}

CellOutcome with_function(CellOutcome o, const GridFunction& f) {
  o.repro["function"] = grid_to_json(f);
  return o;
}

bool within_guard(int d, int n) { return cell_count(d, n) <= kExhaustiveCellGuard; }

// Random weights on q's points with vanishing global moments through degree
// k - 1 and l1 norm in [1/2, 1].
Atom random_atom(std::mt19937_64& rng, const LatticeCube& q, int k, int n) {
  const auto pts = cube_points(q);
  const auto basis = multi_indices_up_to(q.dim(), k - 1);
  Eigen::MatrixXd phi(static_cast<Eigen::Index>(pts.size()), static_cast<Eigen::Index>(basis.size()));
  for (std::size_t r = 0; r < pts.size(); ++r)
    for (std::size_t c = 0; c < basis.size(); ++c) {
      double m = 1.0;
      for (std::size_t i = 0; i < pts[r].size(); ++i)
        for (int e = 0; e < basis[c].entries[i]; ++e) m *= static_cast<double>(pts[r][i]) / (n - 1);
      phi(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = m;
    }
  Eigen::VectorXd v(static_cast<Eigen::Index>(pts.size()));
  for (auto& x : v) x = uniform(rng, -1.0, 1.0);
  for (int pass = 0; pass < 2; ++pass) v -= phi * phi.colPivHouseholderQr().solve(v);
  v *= uniform(rng, 0.5, 1.0) / v.cwiseAbs().sum();
  Atom a{q, {}};
  for (std::size_t r = 0; r < pts.size(); ++r) a.weights[pts[r]] = v[static_cast<Eigen::Index>(r)];
  return a;
}

Chain random_chain(std::mt19937_64& rng, int d, int n, int k) {
  const std::size_t need = static_cast<std::size_t>(polynomial_space_dim(d, k - 1)) + 1;
  auto cubes = enumerate_cubes(d, n);
  std::shuffle(cubes.begin(), cubes.end(), rng);
  Chain c;
  const int want = uniform_int(rng, 1, 3);
  for (const auto& q : cubes) {
    if (static_cast<int>(c.atoms.size()) == want) break;
    if (q.point_count() < need) continue;
    auto trial = c.packing.cubes;
    trial.push_back(q);
    if (!is_packing(trial)) continue;
    c.packing.cubes.push_back(q);
    c.atoms.push_back(random_atom(rng, q, k, n));
    c.coefficients.push_back(uniform(rng, -2.0, 2.0));
  }
  return c;
}

// lambda * delta'_x for a random unisolvent set.
std::optional<GridFunction> random_moment_free(std::mt19937_64& rng, int d, int n, int k) {
  const std::size_t m = static_cast<std::size_t>(polynomial_space_dim(d, k - 1));
  for (int attempt = 0; attempt < 50; ++attempt) {
    std::set<LatticePoint> s;
    LatticeCube all{LatticePoint(static_cast<std::size_t>(d), 0), n - 1};
    const auto pts = cube_points(all);
    if (pts.size() < m + 1) return std::nullopt;
    while (s.size() < m + 1) s.insert(pts[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(pts.size()) - 1))]);
    std::vector<LatticePoint> v(s.begin(), s.end());
    std::shuffle(v.begin(), v.end(), rng);
    const LatticePoint x = v.back();
    v.pop_back();
    try {
      const auto w = delta_correction(x, v, k, n);
      Eigen::VectorXd vals = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(pts.size()));
      GridFunction shape(d, n, vals);
      const double lambda = uniform(rng, 0.5, 2.0) * (uniform01(rng) < 0.5 ? -1.0 : 1.0);
      for (const auto& [p, val] : w) vals[static_cast<Eigen::Index>(shape.linear_index(p))] = lambda * val;
      return GridFunction(d, n, std::move(vals));
    } catch (const InvalidArgument&) {
      continue;
    }
  }
  return std::nullopt;
}

double lp_norm(const GridFunction& f, double p) {
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += std::pow(std::abs(f[i]), p);
  return std::pow(s, 1.0 / p);
}

// ============================================================================
// Invariants
// ============================================================================

std::vector<InvariantDef> build_registry() {
  std::vector<InvariantDef> r;
  const std::vector<std::string> uniform_only = {"uniform"};
  const std::vector<std::string> rough = {"uniform", "lacunary"};

  // --- core_grid -----------------------------------------------------------
  r.push_back({"core.cubes_unique", "core_grid", "enumerate_cubes yields each valid cube once, with the expected count",
               uniform_only, "", [](const CellContext& c) {
                 const auto cubes = enumerate_cubes(c.d, c.n);
                 std::set<LatticeCube> seen(cubes.begin(), cubes.end());
                 long expected = 0;
                 for (int s = 1; s <= c.n - 1; ++s) expected += static_cast<long>(std::pow(c.n - s, c.d));
                 const bool fits = std::all_of(cubes.begin(), cubes.end(), [&](const LatticeCube& q) { return q.fits(c.d, c.n); });
                 CellOutcome o = equal(static_cast<double>(seen.size()), static_cast<double>(expected), 0.0, "distinct cubes");
                 if (cubes.size() != seen.size() || !fits) {
                   o.status = CellStatus::fail;
                   o.detail = "duplicate or out-of-grid cube";
                 }
                 return o;
               }});
  r.push_back({"core.packings_valid", "core_grid", "every enumerated packing passes is_packing", uniform_only, "",
               [](const CellContext& c) {
                 if (cell_count(c.d, c.n) > 9) return skip("enumeration above 9 cells");
                 PackingEnumerator it(c.d, c.n);
                 std::set<Packing> seen;
                 while (auto p = it.next()) {
                   if (!is_packing(*p) || !seen.insert(*p).second) {
                     CellOutcome o;
                     o.status = CellStatus::fail;
                     o.detail = "invalid or repeated packing";
                     return o;
                   }
                 }
                 CellOutcome o;
                 o.measured = static_cast<double>(seen.size());
                 return o;
               }});
  r.push_back({"core.packing_permutation", "core_grid", "is_packing does not depend on the order of its argument",
               uniform_only, "", [](const CellContext& c) {
                 auto rng = rng_for(c, 3);
                 std::vector<LatticeCube> cubes;
                 const int m = uniform_int(rng, 1, 4);
                 for (int i = 0; i < m; ++i) cubes.push_back(random_cube(rng, c.d, c.n));
                 const bool base = is_packing(cubes);
                 for (int t = 0; t < 4; ++t) {
                   std::shuffle(cubes.begin(), cubes.end(), rng);
                   if (is_packing(cubes) != base) {
                     CellOutcome o;
                     o.status = CellStatus::fail;
                     o.detail = "is_packing changed under permutation";
                     return o;
                   }
                 }
                 return CellOutcome{};
               }});

  // --- differences ---------------------------------------------------------
  r.push_back({"differences.linearity", "differences", "finite differences are linear in f", uniform_only, "",
               [](const CellContext& c) {
                 auto rng = rng_for(c, 4);
                 const GridFunction f = gen(c, 1), g = gen(c, 2);
                 const double a = uniform(rng, -3, 3), b = uniform(rng, -3, 3);
                 LatticePoint x(static_cast<std::size_t>(c.d));
                 StepVector h{std::vector<int>(static_cast<std::size_t>(c.d))};
                 for (int attempt = 0;; ++attempt) {
                   for (auto& v : x) v = uniform_int(rng, 0, c.n - 1);
                   const int reach = (c.n - 1) / c.k;
                   for (auto& v : h.steps) v = attempt > 100 ? 0 : uniform_int(rng, -reach, reach);
                   bool ok = true;
                   for (int i = 0; i < c.d; ++i) {
                     const int end = x[static_cast<std::size_t>(i)] + c.k * h.steps[static_cast<std::size_t>(i)];
                     ok = ok && end >= 0 && end <= c.n - 1;
                   }
                   if (ok) break;
                 }
                 const GridFunction comb = added(scaled(f, a), scaled(g, b));
                 const double lhs = finite_difference(comb, x, h, c.k);
                 const double rhs = a * finite_difference(f, x, h, c.k) + b * finite_difference(g, x, h, c.k);
                 const double tol = 1e-12 * std::ldexp(1.0, c.k) * (1 + std::abs(a) * f.sup_norm() + std::abs(b) * g.sup_norm());
                 return with_function(equal(lhs, rhs, tol, "linearity"), f);
               }});
  r.push_back({"differences.osc_null_space", "differences", "osc_k vanishes on polynomials of degree <= k-1",
               {"polynomial"}, "", [](const CellContext& c) {
                 auto rng = rng_for(c, 5);
                 const GridFunction f = gen(c);
                 const LatticeCube q = random_cube(rng, c.d, c.n);
                 return with_function(bound(osc_k(f, q, c.k), 0.0, 1e-10 * (1 + f.sup_norm()), "osc on polynomial"), f);
               }});
  r.push_back({"differences.osc_cube_monotone", "differences", "Q inside Q' implies osc_k(f;Q) <= osc_k(f;Q')", rough,
               "", [](const CellContext& c) {
                 auto rng = rng_for(c, 6);
                 const GridFunction f = gen(c);
                 const LatticeCube outer = random_cube(rng, c.d, c.n);
                 const LatticeCube inner = random_subcube(rng, outer);
                 return with_function(bound(osc_k(f, inner, c.k), osc_k(f, outer, c.k), 1e-12, "osc monotone"), f);
               }});
  r.push_back({"differences.mixed_directional", "differences", "osc_mixed at k e_i equals osc_directional at (k, i)",
               rough, "", [](const CellContext& c) {
                 auto rng = rng_for(c, 7);
                 const GridFunction f = gen(c);
                 const LatticeCube q = random_cube(rng, c.d, c.n);
                 const int axis = uniform_int(rng, 0, c.d - 1);
                 const double a = osc_mixed(f, q, unit_multi_index(c.d, axis, c.k));
                 const double b = osc_directional(f, q, c.k, axis);
                 return with_function(equal(a, b, 0.0, "mixed vs directional"), f);
               }});
  r.push_back({"differences.osc_polynomial_shift", "differences", "osc_k(f + m) = osc_k(f) for deg m <= k-1",
               uniform_only, "", [](const CellContext& c) {
                 auto rng = rng_for(c, 8);
                 const GridFunction f = gen(c);
                 const GridFunction m = generate("polynomial", family_params(c), c.seed + 77);
                 const LatticeCube q = random_cube(rng, c.d, c.n);
                 const double tol = 1e-10 * std::max(1.0, f.sup_norm() + m.sup_norm());
                 return with_function(equal(osc_k(added(f, m), q, c.k), osc_k(f, q, c.k), tol, "polynomial shift"), f);
               }});

  // --- local_approx --------------------------------------------------------
  r.push_back({"approx.shift_invariance", "local_approx", "E_k(f + m; Q) = E_k(f; Q) for deg m <= k-1", uniform_only,
               "", [](const CellContext& c) {
                 auto rng = rng_for(c, 9);
                 const GridFunction f = gen(c);
                 const GridFunction m = generate("polynomial", family_params(c), c.seed + 91);
                 const LatticeCube q = random_cube(rng, c.d, c.n);
                 const double tol = 1e-10 * std::max(1.0, f.sup_norm() + m.sup_norm());
                 return with_function(
                     equal(local_approximation(added(f, m), q, c.k), local_approximation(f, q, c.k), tol, "shift"), f);
               }});
  r.push_back({"approx.homogeneity", "local_approx", "E_k(lambda f; Q) = |lambda| E_k(f; Q)", uniform_only, "",
               [](const CellContext& c) {
                 auto rng = rng_for(c, 10);
                 const GridFunction f = gen(c);
                 const double lambda = uniform(rng, -3, 3);
                 const LatticeCube q = random_cube(rng, c.d, c.n);
                 const double e = local_approximation(f, q, c.k);
                 const double tol = 1e-10 * std::max(1.0, std::abs(lambda) * e);
                 return with_function(
                     equal(local_approximation(scaled(f, lambda), q, c.k), std::abs(lambda) * e, tol, "homogeneity"), f);
               }});
  r.push_back({"approx.projection_upper_bound", "local_approx",
               "E_k on the grid is at most the error of the Whitney projection and of 1-d interpolation", rough, "",
               [](const CellContext& c) {
                 if (c.n < c.k) return skip("fewer points than k");
                 const GridFunction f = gen(c);
                 const double e = local_approximation(f, whole_grid_cube(f), c.k);
                 const GridFunction w = whitney_projection(f, c.k);
                 const double werr = (f.values() - w.values()).cwiseAbs().maxCoeff();
                 CellOutcome o = bound(e, werr, 1e-10 * (1 + f.sup_norm()), "E_k vs Whitney projection");
                 if (c.d == 1) {
                   const Polynomial p = interpolate_1d(f, LatticeInterval{{0}, {c.n - 1}}, c.k);
                   double ierr = 0.0;
                   for (int i = 0; i < c.n; ++i) ierr = std::max(ierr, std::abs(f(LatticePoint{i}) - p.at(f, LatticePoint{i})));
                   o = combine({o, bound(e, ierr, 1e-10 * (1 + f.sup_norm()), "E_k vs interpolation")});
                 }
                 return with_function(o, f);
               }});
  r.push_back({"approx.cube_monotone", "local_approx", "Q inside Q' implies E_k(f;Q) <= E_k(f;Q')", rough, "",
               [](const CellContext& c) {
                 auto rng = rng_for(c, 11);
                 const GridFunction f = gen(c);
                 const LatticeCube outer = random_cube(rng, c.d, c.n);
                 const LatticeCube inner = random_subcube(rng, outer);
                 return with_function(bound(local_approximation(f, inner, c.k), local_approximation(f, outer, c.k),
                                            1e-10 * (1 + f.sup_norm()), "E_k monotone"),
                                      f);
               }});
  r.push_back({"approx.whitney_lower_constant", "local_approx", "osc_k(f;Q) <= 2^k E_k(f;Q)",
               {"uniform", "lacunary", "checkerboard"}, "osc_k / E_k", [](const CellContext& c) {
                 auto rng = rng_for(c, 12);
                 const GridFunction f = gen(c);
                 const LatticeCube q = random_cube(rng, c.d, c.n, std::min(c.k, c.n - 1));
                 const auto cert = whitney_certificate(f, q, c.k);
                 CellOutcome o = bound(cert.osc_k, std::ldexp(cert.e_k, c.k), 1e-12 + 1e-10 * f.sup_norm(), "osc <= 2^k E");
                 if (cert.ratio) o.measured = *cert.ratio;
                 return with_function(o, f);
               }});
  r.push_back({"approx.lp_reference", "local_approx",
               "the simplex value matches a reference-subset search on cubes with at most 12 points", uniform_only, "",
               [](const CellContext& c) {
                 auto rng = rng_for(c, 13);
                 const GridFunction f = gen(c);
                 int max_side = c.n - 1;
                 while (max_side > 1 && static_cast<std::size_t>(std::pow(max_side + 1, c.d)) > 12) --max_side;
                 const LatticeCube q = random_cube(rng, c.d, c.n, 1, max_side);
                 if (q.point_count() > 12) return skip("cube has more than 12 points");
                 return with_function(
                     equal(local_approximation(f, q, c.k), minimax_reference_value(f, q, c.k), 1e-9, "LP vs reference"), f);
               }});
  r.push_back({"approx.mixed_projection", "local_approx",
               "the mixed projection is idempotent; residual / mixed oscillation is measured", rough,
               "residual / osc_alpha", [](const CellContext& c) {
                 auto rng = rng_for(c, 14);
                 const GridFunction f = gen(c);
                 MultiIndex alpha{std::vector<int>(static_cast<std::size_t>(c.d), 0)};
                 for (int i = 0; i < c.k; ++i) alpha.entries[static_cast<std::size_t>(uniform_int(rng, 0, c.d - 1))]++;
                 for (int a : alpha.entries)
                   if (a > c.n) return skip("alpha exceeds points per axis");
                 const auto rep = mixed_projection_report(f, alpha);
                 const GridFunction twice = mixed_projection(rep.projection, alpha);
                 const double drift = (twice.values() - rep.projection.values()).cwiseAbs().maxCoeff();
                 CellOutcome o = bound(drift, 0.0, 1e-10 * (1 + f.sup_norm()), "idempotence");
                 o.measured = rep.measured_constant;
                 return with_function(o, f);
               }});

  // --- variation -----------------------------------------------------------
  r.push_back({"variation.null_space", "variation", "variation of polynomials of degree <= k-1 vanishes",
               {"polynomial"}, "", [](const CellContext& c) {
                 if (!within_guard(c.d, c.n)) return skip("above exhaustive guard");
                 const GridFunction f = gen(c);
                 const double v = variation_bruteforce(f, vparams(c)).value;
                 return with_function(bound(v, 0.0, 1e-8 * (1 + f.sup_norm()), "null space"), f);
               }});
  r.push_back({"variation.homogeneity", "variation", "var(lambda f) = |lambda| var(f)", uniform_only, "",
               [](const CellContext& c) {
                 if (!within_guard(c.d, c.n)) return skip("above exhaustive guard");
                 auto rng = rng_for(c, 15);
                 const GridFunction f = gen(c);
                 const double lambda = uniform(rng, -3, 3);
                 const double v = variation_bruteforce(f, vparams(c)).value;
                 const double w = variation_bruteforce(scaled(f, lambda), vparams(c)).value;
                 return with_function(equal(w, std::abs(lambda) * v, 1e-10 * std::max(1.0, w), "homogeneity"), f);
               }});
  r.push_back({"variation.triangle", "variation", "var(f + g) <= var(f) + var(g)", uniform_only, "",
               [](const CellContext& c) {
                 if (!within_guard(c.d, c.n)) return skip("above exhaustive guard");
                 const GridFunction f = gen(c, 1), g = gen(c, 2);
                 const double vf = variation_bruteforce(f, vparams(c)).value;
                 const double vg = variation_bruteforce(g, vparams(c)).value;
                 const double vs = variation_bruteforce(added(f, g), vparams(c)).value;
                 return with_function(bound(vs, vf + vg, 1e-10, "triangle"), f);
               }});
  r.push_back({"variation.method_ordering", "variation", "dyadic <= local search <= brute force", rough, "",
               [](const CellContext& c) {
                 if (!within_guard(c.d, c.n)) return skip("above exhaustive guard");
                 const GridFunction f = gen(c);
                 const auto p = vparams(c);
                 const double brute = variation_bruteforce(f, p).value;
                 if (is_dyadic_grid(c.n)) {
                   const auto dy = variation_dyadic(f, p);
                   const double local = variation_local_search(f, p, dy.optimizer).value;
                   return with_function(combine({bound(dy.value, local, 1e-12, "dyadic <= local"),
                                                 bound(local, brute, 1e-12, "local <= brute")}),
                                        f);
                 }
                 const double local = variation_local_search(f, p, Packing{}).value;
                 return with_function(bound(local, brute, 1e-12, "local <= brute"), f);
               }});
  r.push_back({"variation.heuristic_ordering", "variation",
               "on large dyadic grids the local search seeded with the dyadic optimum never loses value and reports "
               "its own objective",
               rough, "", [](const CellContext& c) {
                 // Grid shape is chosen here, beyond the exhaustive envelope. A dense LP
                 // per cube makes d = 3 with n > 9 too slow for the default run.
                 const int d = 1 + static_cast<int>(c.seed % 3);
                 const int n = d == 3 ? (c.seed / 3 % 2 ? 9 : 5) : std::array<int, 3>{9, 17, 33}[c.seed / 3 % 3];
                 CellContext big = c;
                 big.d = d;
                 big.n = n;
                 const GridFunction f = gen(big);
                 const auto p = vparams(big);
                 const auto dy = variation_dyadic(f, p);
                 const auto local = variation_local_search(f, p, dy.optimizer, 50);
                 CellOutcome o = combine({bound(dy.value, local.value, 1e-12, "dyadic <= local"),
                                          equal(local.value, packing_objective(f, local.optimizer, p), 1e-12,
                                                "reported objective")});
                 o.repro["grid"] = json{{"d", d}, {"n", n}};
                 return with_function(o, f);
               }});
  r.push_back({"variation.monotone_k", "variation", "variation is nonincreasing in k", uniform_only, "",
               [](const CellContext& c) {
                 if (!within_guard(c.d, c.n)) return skip("above exhaustive guard");
                 const GridFunction f = gen(c);
                 auto hi = vparams(c);
                 hi.k += 1;
                 return with_function(bound(variation_bruteforce(f, hi).value, variation_bruteforce(f, vparams(c)).value,
                                            1e-10, "k monotone"),
                                      f);
               }});
  r.push_back({"variation.monotone_p", "variation", "variation is nonincreasing in p", uniform_only, "",
               [](const CellContext& c) {
                 if (!within_guard(c.d, c.n)) return skip("above exhaustive guard");
                 const GridFunction f = gen(c);
                 auto hi = vparams(c);
                 hi.p += 1.0;
                 return with_function(bound(variation_bruteforce(f, hi).value, variation_bruteforce(f, vparams(c)).value,
                                            1e-12, "p monotone"),
                                      f);
               }});
  r.push_back({"variation.region_monotone", "variation", "variation relative to a sub-box grows with the box",
               uniform_only, "", [](const CellContext& c) {
                 if (!within_guard(c.d, c.n)) return skip("above exhaustive guard");
                 auto rng = rng_for(c, 16);
                 const GridFunction f = gen(c);
                 LatticeInterval outer{LatticePoint(static_cast<std::size_t>(c.d)), LatticePoint(static_cast<std::size_t>(c.d))};
                 LatticeInterval inner = outer;
                 for (int i = 0; i < c.d; ++i) {
                   const auto a = static_cast<std::size_t>(i);
                   outer.lower[a] = uniform_int(rng, 0, c.n - 2);
                   outer.upper[a] = uniform_int(rng, outer.lower[a] + 1, c.n - 1);
                   inner.lower[a] = uniform_int(rng, outer.lower[a], outer.upper[a] - 1);
                   inner.upper[a] = uniform_int(rng, inner.lower[a] + 1, outer.upper[a]);
                 }
                 const double vi = variation_bruteforce_region(f, vparams(c), inner).value;
                 const double vo = variation_bruteforce_region(f, vparams(c), outer).value;
                 const double vf = variation_bruteforce(f, vparams(c)).value;
                 return with_function(
                     combine({bound(vi, vo, 1e-12, "inner <= outer"), bound(vo, vf, 1e-12, "outer <= grid")}), f);
               }});
  r.push_back({"variation.subadditivity", "variation",
               "(var(S1)^p + var(S2)^p)^(1/p) <= var(S1 u S2) for a split of the grid", uniform_only, "",
               [](const CellContext& c) {
                 if (!within_guard(c.d, c.n)) return skip("above exhaustive guard");
                 if (c.n < 3) return skip("grid too small to split");
                 auto rng = rng_for(c, 17);
                 const GridFunction f = gen(c);
                 const int axis = uniform_int(rng, 0, c.d - 1);
                 const int cut = uniform_int(rng, 1, c.n - 2);
                 LatticeInterval s1{LatticePoint(static_cast<std::size_t>(c.d), 0), LatticePoint(static_cast<std::size_t>(c.d), c.n - 1)};
                 LatticeInterval s2 = s1;
                 s1.upper[static_cast<std::size_t>(axis)] = cut;
                 s2.lower[static_cast<std::size_t>(axis)] = cut;
                 const auto p = vparams(c);
                 const double v1 = variation_bruteforce_region(f, p, s1).value;
                 const double v2 = variation_bruteforce_region(f, p, s2).value;
                 const double v = variation_bruteforce(f, p).value;
                 const double lhs = std::pow(std::pow(v1, p.p) + std::pow(v2, p.p), 1.0 / p.p);
                 return with_function(bound(lhs, v, 1e-12, "subadditivity"), f);
               }});
  r.push_back({"variation.lp_sandwich", "variation",
               "var <= |f|_p <= 2 var for separated interior point masses with k = 1: up to 3 points when d = 1, one "
               "point with p >= d otherwise",
               {"point-masses"}, "", [](const CellContext& c) {
                 if (!within_guard(c.d, c.n)) return skip("above exhaustive guard");
                 if (c.n < 3) return skip("no interior points");
                 // Outside this regime the upper bound fails: for k >= 2 small lattice
                 // cubes hold too few points, for p < d the 2^d cubes cornered at a mass
                 // overshoot, and in d >= 2 two masses can be corners of one cube.
                 auto p = vparams(c);
                 p.k = 1;
                 p.p = std::max(p.p, static_cast<double>(c.d));
                 auto fp = family_params(c);
                 if (c.d == 1) {
                   // adjacent masses would merge into a plateau
                   fp.separated = true;
                   const int capacity = (c.n - 1) / 2;
                   fp.support = 1 + static_cast<int>(c.seed % static_cast<std::uint64_t>(std::min(3, capacity)));
                 } else {
                   fp.support = 1;
                 }
                 const GridFunction f = generate("point-masses", fp, c.seed);
                 const double v = variation_bruteforce(f, p).value;
                 const double norm = lp_norm(f, p.p);
                 return with_function(
                     combine({bound(v, norm, 1e-10, "var <= |f|_p"), bound(norm, 2 * v, 1e-10, "|f|_p <= 2 var")}), f);
               }});
  r.push_back({"variation.lipschitz_embedding", "variation",
               "osc-weighted variation <= H (sum |Q|)^(1/p) <= H with H the discrete Lipschitz seminorm", {"lacunary"},
               "", [](const CellContext& c) {
                 if (!within_guard(c.d, c.n)) return skip("above exhaustive guard");
                 const GridFunction f = gen(c);
                 const auto p = vparams(c, WeightKind::osc_k);
                 double h = 0.0;
                 for (const auto& q : enumerate_cubes(f)) h = std::max(h, osc_k(f, q, c.k) / std::pow(q.volume(c.n), 1.0 / p.p));
                 const auto res = variation_bruteforce(f, p);
                 const double mid = h * std::pow(res.optimizer.total_volume(c.n), 1.0 / p.p);
                 const double tol = 1e-12 * std::max(1.0, h);
                 return with_function(combine({bound(res.value, mid, tol, "var <= H |pi|^(1/p)"), bound(mid, h, tol, "<= H")}), f);
               }});
  r.push_back({"variation.vitali_telescoping", "variation",
               "the Vitali deviation of a box equals the sum over a hyperplane partition", uniform_only, "",
               [](const CellContext& c) {
                 auto rng = rng_for(c, 18);
                 const GridFunction f = gen(c);
                 LatticeInterval box{LatticePoint(static_cast<std::size_t>(c.d)), LatticePoint(static_cast<std::size_t>(c.d))};
                 std::vector<std::vector<int>> cuts(static_cast<std::size_t>(c.d));
                 for (int i = 0; i < c.d; ++i) {
                   const auto a = static_cast<std::size_t>(i);
                   box.lower[a] = uniform_int(rng, 0, c.n - 2);
                   box.upper[a] = uniform_int(rng, box.lower[a] + 1, c.n - 1);
                   cuts[a].push_back(box.lower[a]);
                   for (int t = box.lower[a] + 1; t < box.upper[a]; ++t)
                     if (uniform01(rng) < 0.5) cuts[a].push_back(t);
                   cuts[a].push_back(box.upper[a]);
                 }
                 CompensatedSum s;
                 std::vector<std::size_t> idx(static_cast<std::size_t>(c.d), 0);
                 for (;;) {
                   LatticeInterval part = box;
                   for (std::size_t a = 0; a < idx.size(); ++a) {
                     part.lower[a] = cuts[a][idx[a]];
                     part.upper[a] = cuts[a][idx[a] + 1];
                   }
                   s.add(vitali_deviation(f, part));
                   std::size_t a = idx.size();
                   while (a > 0 && idx[a - 1] + 2 == cuts[a - 1].size()) idx[--a] = 0;
                   if (a == 0) break;
                   ++idx[a - 1];
                 }
                 return with_function(equal(vitali_deviation(f, box), s.value(), 1e-12, "telescoping"), f);
               }});
  r.push_back({"variation.whitney_transfer", "variation",
               "E-weighted and osc-weighted variations differ by a factor in [2^-k, C]", rough, "var_E / var_osc",
               [](const CellContext& c) {
                 if (!within_guard(c.d, c.n)) return skip("above exhaustive guard");
                 const GridFunction f = gen(c);
                 const double ve = variation_bruteforce(f, vparams(c)).value;
                 const double vo = variation_bruteforce(f, vparams(c, WeightKind::osc_k)).value;
                 CellOutcome o = bound(vo, std::ldexp(ve, c.k), 1e-12 + 1e-10 * f.sup_norm(), "var_osc <= 2^k var_E");
                 if (vo > 1e-9) o.measured = ve / vo;
                 return with_function(o, f);
               }});
  r.push_back({"variation.cap_monotone", "variation",
               "restricted variation and the AC modulus grow with the cap and reach the full variation at cap 1",
               uniform_only, "", [](const CellContext& c) {
                 if (!within_guard(c.d, c.n)) return skip("above exhaustive guard");
                 auto rng = rng_for(c, 19);
                 const GridFunction f = gen(c);
                 const auto p = vparams(c);
                 double c1 = uniform01(rng), c2 = uniform01(rng);
                 if (c1 > c2) std::swap(c1, c2);
                 c1 = std::max(c1, 1e-3);
                 c2 = std::max(c2, c1);
                 const double full = variation_bruteforce(f, p).value;
                 return with_function(
                     combine({bound(restricted_variation(f, p, c1), restricted_variation(f, p, c2), 1e-12, "mesh cap"),
                              bound(ac_modulus(f, p, c1), ac_modulus(f, p, c2), 1e-12, "volume cap"),
                              equal(restricted_variation(f, p, 1.0), full, 1e-12, "mesh cap 1"),
                              equal(ac_modulus(f, p, 1.0), full, 1e-12, "volume cap 1")}),
                     f);
               }});
  r.push_back({"variation.classical_consistency", "variation",
               "Vitali methods agree; Wiener p=1 equals Jordan and the osc-weighted brute force in 1-d", rough, "",
               [](const CellContext& c) {
                 if (!within_guard(c.d, c.n)) return skip("above exhaustive guard");
                 const GridFunction f = gen(c);
                 const double exact = vitali_variation(f, VitaliMethod::grid_partition).value;
                 const double brute = vitali_variation(f, VitaliMethod::brute).value;
                 const double local = vitali_variation(f, VitaliMethod::local_search).value;
                 CellOutcome o = combine({equal(brute, exact, 1e-12, "vitali brute vs partition"),
                                          bound(local, exact, 1e-12, "vitali local <= exact")});
                 if (c.d == 1) {
                   const double osc_var = variation_bruteforce(f, VariationParams{1, c.p, WeightKind::osc_k}).value;
                   o = combine({o, equal(wiener_variation(f, 1.0), jordan_variation(f), 1e-12, "wiener 1 vs jordan"),
                                equal(wiener_variation(f, c.p), osc_var, 1e-12, "wiener vs osc brute")});
                 }
                 return with_function(o, f);
               }});

  // --- predual_atoms -------------------------------------------------------
  r.push_back({"predual.atom_orthogonality", "predual_atoms",
               "valid atoms annihilate every polynomial of degree <= k-1", {"polynomial"}, "",
               [](const CellContext& c) {
                 auto rng = rng_for(c, 20);
                 const std::size_t need = static_cast<std::size_t>(polynomial_space_dim(c.d, c.k - 1)) + 1;
                 LatticeCube q = random_cube(rng, c.d, c.n);
                 for (int t = 0; t < 20 && q.point_count() < need; ++t) q = random_cube(rng, c.d, c.n);
                 if (q.point_count() < need) return skip("no cube with enough points");
                 const Atom a = random_atom(rng, q, c.k, c.n);
                 const auto diag = validate_atom(a, c.k, c.n);
                 const GridFunction m = gen(c);
                 CompensatedSum s;
                 for (const auto& [p, w] : a.weights) s.add(w * m(p));
                 CellOutcome o = bound(std::abs(s.value()), 0.0, 1e-10 * (1 + m.sup_norm()), "pairing with polynomial");
                 if (!diag.valid) {
                   o.status = CellStatus::fail;
                   o.detail = "constructed atom rejected: " + diag.problems.front();
                 }
                 return with_function(o, m);
               }});
  r.push_back({"predual.scaling", "predual_atoms", "upper(lambda g) = |lambda| upper(g)", {"point-masses"}, "",
               [](const CellContext& c) {
                 if (!within_guard(c.d, c.n)) return skip("above exhaustive guard");
                 auto rng = rng_for(c, 21);
                 const auto g = random_moment_free(rng, c.d, c.n, c.k);
                 if (!g) return skip("no unisolvent set");
                 const double lambda = uniform(rng, -3, 3);
                 UNormOptions opts;
                 opts.random_witnesses = 8;
                 opts.seed = c.seed;
                 const auto b1 = u_norm_bounds(*g, vparams(c), opts);
                 const auto b2 = u_norm_bounds(scaled(*g, lambda), vparams(c), opts);
                 return with_function(equal(b2.upper, std::abs(lambda) * b1.upper, 1e-10 * std::max(1.0, b2.upper), "scaling"), *g);
               }});
  r.push_back({"predual.triangle", "predual_atoms",
               "concatenated witness decompositions represent g1 + g2 with norm upper(g1) + upper(g2)", {"point-masses"},
               "", [](const CellContext& c) {
                 if (!within_guard(c.d, c.n)) return skip("above exhaustive guard");
                 auto rng = rng_for(c, 22);
                 const auto g1 = random_moment_free(rng, c.d, c.n, c.k);
                 const auto g2 = random_moment_free(rng, c.d, c.n, c.k);
                 if (!g1 || !g2) return skip("no unisolvent set");
                 UNormOptions opts;
                 opts.random_witnesses = 4;
                 opts.seed = c.seed;
                 const auto b1 = u_norm_bounds(*g1, vparams(c), opts);
                 const auto b2 = u_norm_bounds(*g2, vparams(c), opts);
                 auto chains = b1.witness_decomposition;
                 chains.insert(chains.end(), b2.witness_decomposition.begin(), b2.witness_decomposition.end());
                 Eigen::VectorXd sum = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(g1->size()));
                 for (const auto& ch : chains) sum += chain_function(ch, c.d, c.n).values();
                 const double recon = (sum - g1->values() - g2->values()).cwiseAbs().maxCoeff();
                 const double norm = decomposition_norm(chains, c.p);
                 return with_function(combine({bound(recon, 0.0, 1e-9, "reconstruction"),
                                               equal(norm, b1.upper + b2.upper, 1e-10 * std::max(1.0, norm), "norm sum")}),
                                      *g1);
               }});
  r.push_back({"predual.sandwich_consistency", "predual_atoms",
               "lower <= upper, both recomputed from their witnesses", {"point-masses"}, "upper / lower",
               [](const CellContext& c) {
                 if (!within_guard(c.d, c.n)) return skip("above exhaustive guard");
                 auto rng = rng_for(c, 23);
                 const auto g = random_moment_free(rng, c.d, c.n, c.k);
                 if (!g) return skip("no unisolvent set");
                 UNormOptions opts;
                 opts.random_witnesses = 8;
                 opts.seed = c.seed;
                 const auto p = vparams(c);
                 const auto b = u_norm_bounds(*g, p, opts);
                 Eigen::VectorXd sum = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(g->size()));
                 for (const auto& ch : b.witness_decomposition) sum += chain_function(ch, c.d, c.n).values();
                 const double recon = (sum - g->values()).cwiseAbs().maxCoeff();
                 double lower = 0.0;
                 const double v = variation_bruteforce(b.witness_function, p).value;
                 if (v > 1e-12) lower = std::abs(b.witness_function.values().dot(g->values())) / v;
                 CellOutcome o = combine({bound(b.lower, b.upper, 1e-10 * std::max(1.0, b.upper), "lower <= upper"),
                                          bound(recon, 0.0, 1e-9, "upper witness reconstructs g"),
                                          equal(b.upper, decomposition_norm(b.witness_decomposition, p.p), 1e-12, "upper recomputed"),
                                          equal(b.lower, lower, 1e-10 * std::max(1.0, lower), "lower recomputed")});
                 if (b.lower > 0) o.measured = b.upper / b.lower;
                 return with_function(o, *g);
               }});
  r.push_back({"predual.duality", "predual_atoms", "|<f, b>| <= [b]_p' var(f) for random chains", uniform_only, "",
               [](const CellContext& c) {
                 if (!within_guard(c.d, c.n)) return skip("above exhaustive guard");
                 auto rng = rng_for(c, 24);
                 const GridFunction f = gen(c);
                 const Chain chain = random_chain(rng, c.d, c.n, c.k);
                 if (chain.atoms.empty()) return skip("no cube carries an atom");
                 const auto rep = duality_check(f, chain, vparams(c));
                 CellOutcome o = bound(rep.pairing, rep.rhs, rep.tolerance, "duality");
                 return with_function(o, f);
               }});
  return r;
}

}  // namespace

const std::vector<std::string>& declared_invariants() {
  static const std::vector<std::string> names = {
      "core.cubes_unique",
      "core.packings_valid",
      "core.packing_permutation",
      "differences.linearity",
      "differences.osc_null_space",
      "differences.osc_cube_monotone",
      "differences.mixed_directional",
      "differences.osc_polynomial_shift",
      "approx.shift_invariance",
      "approx.homogeneity",
      "approx.projection_upper_bound",
      "approx.cube_monotone",
      "approx.whitney_lower_constant",
      "approx.lp_reference",
      "approx.mixed_projection",
      "variation.null_space",
      "variation.homogeneity",
      "variation.triangle",
      "variation.method_ordering",
      "variation.heuristic_ordering",
      "variation.monotone_k",
      "variation.monotone_p",
      "variation.region_monotone",
      "variation.subadditivity",
      "variation.lp_sandwich",
      "variation.lipschitz_embedding",
      "variation.vitali_telescoping",
      "variation.whitney_transfer",
      "variation.cap_monotone",
      "variation.classical_consistency",
      "predual.atom_orthogonality",
      "predual.scaling",
      "predual.triangle",
      "predual.sandwich_consistency",
      "predual.duality",
  };
  return names;
}

const std::vector<InvariantDef>& invariant_registry() {
  static const std::vector<InvariantDef> reg = build_registry();
  return reg;
}

std::vector<std::string> registry_mismatches() {
  std::set<std::string> declared(declared_invariants().begin(), declared_invariants().end());
  std::set<std::string> registered;
  for (const auto& def : invariant_registry()) registered.insert(def.name);
  std::vector<std::string> out;
  for (const auto& n : declared)
    if (!registered.count(n)) out.push_back("unregistered: " + n);
  for (const auto& n : registered)
    if (!declared.count(n)) out.push_back("undeclared: " + n);
  return out;
}

int SuiteReport::failures() const {
  int f = 0;
  for (const auto& s : invariants) f += s.failed;
  return f;
}

namespace {

CellContext context_for(const SuiteConfig& cfg, const std::string& family, std::uint64_t seed) {
  CellContext c;
  c.family = family;
  c.seed = seed;
  std::uint64_t s = seed;
  c.d = cfg.d_values[s % cfg.d_values.size()];
  s /= cfg.d_values.size();
  c.n = cfg.n_values[s % cfg.n_values.size()];
  s /= cfg.n_values.size();
  c.k = cfg.k_values[s % cfg.k_values.size()];
  s /= cfg.k_values.size();
  c.p = cfg.p_values[s % cfg.p_values.size()];
  if (family == "monotone-walk") c.d = 1;
  return c;
}

json context_json(const CellContext& c) {
  return json{{"family", c.family}, {"seed", c.seed}, {"d", c.d}, {"n", c.n}, {"k", c.k}, {"p", c.p}};
}

const char* status_name(CellStatus s) {
  switch (s) {
    case CellStatus::pass: return "pass";
    case CellStatus::fail: return "fail";
    case CellStatus::skip: return "skip";
  }
  return "unknown";
}

}  // namespace

SuiteReport run_suite(const SuiteConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  SuiteReport report;
  report.config = config;
  if (config.fuzz) report.config.seed_start = std::random_device{}() | (static_cast<std::uint64_t>(std::random_device{}()) << 32);

  std::vector<const InvariantDef*> selected;
  if (config.invariants.empty()) {
    for (const auto& def : invariant_registry()) selected.push_back(&def);
  } else {
    for (const auto& name : config.invariants) {
      auto it = std::find_if(invariant_registry().begin(), invariant_registry().end(),
                             [&](const InvariantDef& d) { return d.name == name; });
      if (it == invariant_registry().end()) throw InvalidArgument("unknown invariant '" + name + "'");
      selected.push_back(&*it);
    }
  }
  std::sort(selected.begin(), selected.end(), [](const auto* a, const auto* b) { return a->name < b->name; });

  for (const auto* def : selected) {
    InvariantSummary sum;
    sum.name = def->name;
    sum.module = def->module;
    sum.measured_label = def->measured_label;
    auto families = def->families;
    std::sort(families.begin(), families.end());
    for (const auto& family : families) {
      for (int i = 0; i < config.seeds; ++i) {
        const std::uint64_t seed = report.config.seed_start + static_cast<std::uint64_t>(i);
        CellRecord rec{def->name, context_for(config, family, seed), {}};
        try {
          rec.outcome = def->run(rec.context);
        } catch (const GuardViolation& e) {
          rec.outcome = skip(e.what());
        } catch (const std::exception& e) {
          rec.outcome.status = CellStatus::fail;
          rec.outcome.slack = 0.0;
          rec.outcome.detail = std::string("exception: ") + e.what();
        }
        switch (rec.outcome.status) {
          case CellStatus::pass: ++sum.passed; break;
          case CellStatus::fail: ++sum.failed; break;
          case CellStatus::skip: ++sum.skipped; break;
        }
        if (rec.outcome.status != CellStatus::skip)
          sum.worst_slack = sum.worst_slack ? std::min(*sum.worst_slack, rec.outcome.slack) : rec.outcome.slack;
        if (rec.outcome.measured && std::isfinite(*rec.outcome.measured)) {
          const double m = *rec.outcome.measured;
          sum.measured_min = sum.measured_min ? std::min(*sum.measured_min, m) : m;
          sum.measured_max = sum.measured_max ? std::max(*sum.measured_max, m) : m;
        }
        report.cells.push_back(std::move(rec));
      }
    }
    report.invariants.push_back(std::move(sum));
  }

  if (!config.archive_path.empty()) {
    std::ofstream out(config.archive_path, std::ios::app);
    for (const auto& c : report.cells)
      if (c.outcome.status == CellStatus::fail)
        out << json{{"invariant", c.invariant}, {"context", context_json(c.context)}, {"detail", c.outcome.detail},
                    {"repro", c.outcome.repro}}
                   .dump()
            << "\n";
  }
  report.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

json suite_report_to_json(const SuiteReport& r, bool include_timing) {
  json j;
  j["schema_version"] = SuiteReport::kSchemaVersion;
  j["config"] = suite_config_to_json(r.config);
  j["passed"] = r.all_passed();
  json inv = json::array();
  json constants = json::object();
  for (const auto& s : r.invariants) {
    json e{{"name", s.name}, {"module", s.module}, {"passed", s.passed}, {"failed", s.failed}, {"skipped", s.skipped}};
    e["worst_slack"] = s.worst_slack ? json(*s.worst_slack) : json(nullptr);
    if (!s.measured_label.empty()) {
      e["measured"] = json{{"label", s.measured_label},
                           {"min", s.measured_min ? json(*s.measured_min) : json(nullptr)},
                           {"max", s.measured_max ? json(*s.measured_max) : json(nullptr)}};
      constants[s.name] = e["measured"];
    }
    inv.push_back(std::move(e));
  }
  j["invariants"] = std::move(inv);
  j["measured_constants"] = std::move(constants);
  json cells = json::array();
  for (const auto& c : r.cells) {
    json e{{"invariant", c.invariant}, {"status", status_name(c.outcome.status)}};
    e.update(context_json(c.context));
    if (c.outcome.status != CellStatus::skip) e["slack"] = c.outcome.slack;
    if (c.outcome.measured) e["measured"] = *c.outcome.measured;
    if (!c.outcome.detail.empty()) e["detail"] = c.outcome.detail;
    if (c.outcome.status == CellStatus::fail) e["repro"] = c.outcome.repro;
    cells.push_back(std::move(e));
  }
  j["cells"] = std::move(cells);
  if (include_timing) j["runtime_seconds"] = r.runtime_seconds;
  return j;
}

}  // namespace latvar
