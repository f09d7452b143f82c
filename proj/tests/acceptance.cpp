// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>

#include <Eigen/Dense>

#include "latvar/classical.hpp"
#include "latvar/differences.hpp"
#include "latvar/families.hpp"
#include "latvar/local_approx.hpp"
#include "latvar/predual.hpp"
#include "latvar/random.hpp"
#include "latvar/variation.hpp"
#include "oracles.hpp"

using namespace latvar;

namespace {

int failures = 0;

void report(int id, bool ok, const std::string& what) {
  std::printf("criterion %2d: %s  %s\n", id, ok ? "PASS" : "FAIL", what.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

LatticeCube random_cube(std::mt19937_64& rng, int d, int n, int max_side = -1) {
  if (max_side < 1 || max_side > n - 1) max_side = n - 1;
  LatticeCube q{LatticePoint(static_cast<std::size_t>(d)), uniform_int(rng, 1, max_side)};
  for (auto& o : q.origin) o = uniform_int(rng, 0, n - 1 - q.side);
  return q;
}

const char* rough_family(std::uint64_t i) {
  static const char* names[] = {"uniform", "lacunary", "checkerboard", "separable"};
  return names[i % 4];
}

// --- 1 ---------------------------------------------------------------------
void oracle_agreement() {
  const auto t0 = std::chrono::steady_clock::now();
  int instances = 0, bad = 0;
  double worst = -1e300;
  std::uint64_t seed = 0;
  for (int d : {1, 2})
    for (int n : {3, 4, 5})
      for (int k : {1, 2})
        for (double p : {1.0, 2.0})
          for (int rep = 0; rep < 9; ++rep, ++seed) {
            FamilyParams fp;
            fp.d = d;
            fp.n = n;
            fp.exponent = d / p;
            const auto f = generate(rough_family(seed), fp, seed);
            const VariationParams vp{k, p};
            const double brute = variation_bruteforce(f, vp).value;
            double dyadic = -1.0;
            Packing start;
            if (is_dyadic_grid(n)) {
              const auto dy = variation_dyadic(f, vp);
              dyadic = dy.value;
              start = dy.optimizer;
            }
            const double local = variation_local_search(f, vp, start).value;
            worst = std::max(worst, local - brute);
            if (local > brute + 1e-12 || (dyadic >= 0 && dyadic > local + 1e-12)) ++bad;
            ++instances;
          }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  report(1, bad == 0 && instances >= 200 && secs < 300,
         "dyadic <= local <= brute on " + std::to_string(instances) + " functions, " + std::to_string(bad) +
             " violations, max(local - brute) = " + fmt(worst) + ", " + fmt(secs) + " s");
}

// --- 2 ---------------------------------------------------------------------
void null_space() {
  int bad = 0, count = 0;
  double worst = 0.0;
  for (int k : {1, 2, 3})
    for (int d : {1, 2})
      for (std::uint64_t s = 0; s < 100; ++s) {
        FamilyParams fp;
        fp.d = d;
        fp.n = 3 + static_cast<int>(s % 3);
        fp.degree = k - 1;
        const auto f = generate("polynomial", fp, s);
        const double v = variation_bruteforce(f, VariationParams{k, 1.0 + s % 2}).value;
        const double scaled = v / (1 + f.sup_norm());
        worst = std::max(worst, scaled);
        if (scaled > 1e-8) ++bad;
        ++count;
      }
  report(2, bad == 0, std::to_string(count) + " polynomials, max var / (1 + |f|) = " + fmt(worst));
}

// --- 3 ---------------------------------------------------------------------
void whitney_constants() {
  std::mt19937_64 rng(3);
  int counted = 0, bad_ratio = 0, bad_proj = 0, total = 0;
  double max11 = 0.0, lo = 1e300, hi = 0.0;
  for (std::uint64_t s = 0; s < 1200; ++s) {
    const int d = 1 + static_cast<int>(s % 2);
    const int k = 1 + static_cast<int>(s / 2 % 2);
    FamilyParams fp;
    fp.d = d;
    fp.n = 3 + static_cast<int>(s / 4 % 3);
    const auto f = generate(rough_family(s / 12), fp, s);
    // a cube of side < k carries no k-th difference, so osc_k vanishes there
    auto q = random_cube(rng, d, fp.n);
    while (q.side < k) q = random_cube(rng, d, fp.n);
    const auto cert = whitney_certificate(f, q, k);
    ++total;
    // E_k(f; Q) against the Whitney projection built on Q itself
    const GridFunction local = restrict_to_cube(f, q);
    const double proj_err = (local.values() - whitney_projection(local, k).values()).cwiseAbs().maxCoeff();
    if (cert.e_k > proj_err + 1e-10 * (1 + f.sup_norm())) ++bad_proj;
    if (cert.e_k <= 1e-9) continue;
    ++counted;
    const double r = cert.osc_k / cert.e_k;
    lo = std::min(lo, r);
    hi = std::max(hi, r);
    if (r < 1 - 1e-9 || r > std::ldexp(1.0, k) * (1 + 1e-9)) ++bad_ratio;
    if (k == 1 && d == 1) max11 = std::max(max11, r);
  }
  report(3, counted >= 1000 && bad_ratio == 0 && bad_proj == 0 && std::abs(max11 - 2.0) <= 1e-12,
         std::to_string(counted) + " instances with E > 1e-9, ratio range [" + fmt(lo) + ", " + fmt(hi) +
             "], k=d=1 max ratio " + fmt(max11) + ", projection bound violations " + std::to_string(bad_proj) + "/" +
             std::to_string(total));
}

// --- 4 ---------------------------------------------------------------------
void monotone_telescoping() {
  int bad = 0;
  double worst = 0.0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    const auto f = generate("monotone-walk", FamilyParams{1, 5}, s);
    const double v = variation_bruteforce(f, VariationParams{1, 1.0, WeightKind::osc_k}).value;
    const double err = std::abs(v - (f[4] - f[0]));
    worst = std::max(worst, err);
    if (err > 1e-12) ++bad;
  }
  report(4, bad == 0, "100 walks, osc-weighted var - (f(end) - f(start)) max |err| = " + fmt(worst));
}

// --- 5 ---------------------------------------------------------------------
double lp_norm(const GridFunction& f, double p) {
  double s = 0;
  for (std::size_t i = 0; i < f.size(); ++i) s += std::pow(std::abs(f[i]), p);
  return std::pow(s, 1 / p);
}

void point_mass_sandwich() {
  int bad_unit = 0, units = 0;
  for (int n : {3, 4, 5})
    for (int i = 1; i <= n - 2; ++i) {
      Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
      v[i] = 1.0;
      const double var = variation_bruteforce(GridFunction(1, n, v), VariationParams{1, 1.0}).value;
      if (std::abs(var - 1.0) > 1e-10) ++bad_unit;
      ++units;
    }
  int bad = 0, count = 0;
  double worst = 1e300;
  for (std::uint64_t s = 0; s < 300; ++s) {
    FamilyParams fp;
    fp.d = s % 4 == 3 ? 2 : 1;
    fp.n = 3 + static_cast<int>(s / 4 % 3);
    double p = 1.0 + static_cast<double>(s / 12 % 2);
    if (fp.d == 2) {
      fp.support = 1;
      p = std::max(p, 2.0);
    } else {
      const int cap = (fp.n - 1) / 2;  // separated interior points
      fp.support = 1 + static_cast<int>(s / 24 % static_cast<std::uint64_t>(std::min(3, cap)));
    }
    const auto f = generate("point-masses", fp, s);
    const double var = variation_bruteforce(f, VariationParams{1, p}).value;
    const double norm = lp_norm(f, p);
    worst = std::min({worst, norm - var, 2 * var - norm});
    if (var > norm + 1e-10 || norm > 2 * var + 1e-10) ++bad;
    ++count;
  }
  report(5, bad_unit == 0 && bad == 0,
         std::to_string(units) + " unit masses with var = 1, " + std::to_string(count) +
             " sandwiches (k = 1, p >= d), worst slack " + fmt(worst));
}

// --- 6 ---------------------------------------------------------------------
void classical_golden() {
  double worst = 0.0;
  for (int n : {3, 5}) {
    const auto xy = sample_grid(2, n, [](const auto& x) { return x[0] * x[1]; });
    const auto sum = sample_grid(2, n, [](const auto& x) { return x[0] + x[1]; });
    worst = std::max({worst, std::abs(vitali_variation(xy, VitaliMethod::brute).value - 1.0),
                      std::abs(vitali_variation(xy).value - 1.0), std::abs(hardy_krause_variation(xy) - 3.0),
                      std::abs(tonelli_variation(sum) - 2.0), std::abs(vitali_variation(sum, VitaliMethod::brute).value),
                      std::abs(vitali_variation(sum).value)});
  }
  report(6, worst <= 1e-12, "Vitali(xy)=1, HK(xy)=3, Tonelli(x+y)=2, Vitali(x+y)=0 on n=3,5, max err " + fmt(worst));
}

// --- 7 ---------------------------------------------------------------------
void vitali_telescoping() {
  std::mt19937_64 rng(7);
  double worst = 0.0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    const int d = 2 + static_cast<int>(s % 2);
    const int n = 5;
    FamilyParams fp;
    fp.d = d;
    fp.n = n;
    const auto f = generate("uniform", fp, s);
    LatticeInterval box{LatticePoint(static_cast<std::size_t>(d)), LatticePoint(static_cast<std::size_t>(d))};
    std::vector<std::vector<int>> cuts(static_cast<std::size_t>(d));
    for (std::size_t a = 0; a < static_cast<std::size_t>(d); ++a) {
      box.lower[a] = uniform_int(rng, 0, n - 2);
      box.upper[a] = uniform_int(rng, box.lower[a] + 1, n - 1);
      cuts[a].push_back(box.lower[a]);
      for (int t = box.lower[a] + 1; t < box.upper[a]; ++t)
        if (uniform01(rng) < 0.5) cuts[a].push_back(t);
      cuts[a].push_back(box.upper[a]);
    }
    double sum = 0.0;
    std::vector<std::size_t> idx(static_cast<std::size_t>(d), 0);
    for (;;) {
      LatticeInterval part = box;
      for (std::size_t a = 0; a < idx.size(); ++a) {
        part.lower[a] = cuts[a][idx[a]];
        part.upper[a] = cuts[a][idx[a] + 1];
      }
      sum += vitali_deviation(f, part);
      std::size_t a = idx.size();
      while (a > 0 && idx[a - 1] + 2 == cuts[a - 1].size()) idx[--a] = 0;
      if (a == 0) break;
      ++idx[a - 1];
    }
    worst = std::max(worst, std::abs(sum - vitali_deviation(f, box)));
  }
  report(7, worst <= 1e-12, "100 partitions in d = 2, 3, max |delta(I) - sum delta(I')| = " + fmt(worst));
}

// --- 8 ---------------------------------------------------------------------
void lipschitz_embedding() {
  int bad = 0;
  double worst = -1e300;
  for (std::uint64_t s = 0; s < 200; ++s) {
    FamilyParams fp;
    fp.d = 1 + static_cast<int>(s % 2);
    fp.n = 3 + static_cast<int>(s / 2 % 3);
    const int k = 1 + static_cast<int>(s / 6 % 2);
    const double p = 1.0 + static_cast<double>(s / 12 % 2);
    fp.exponent = fp.d / p;
    const auto f = generate("lacunary", fp, s);
    double h = 0.0;
    for (const auto& q : enumerate_cubes(f)) h = std::max(h, osc_k(f, q, k) / std::pow(q.volume(fp.n), 1 / p));
    const double v = variation_bruteforce(f, VariationParams{k, p, WeightKind::osc_k}).value;
    worst = std::max(worst, v - h);
    if (v > h * (1 + 1e-12) + 1e-15) ++bad;
  }
  report(8, bad == 0, "200 lacunary seeds, violations " + std::to_string(bad) + ", max(var - H) = " + fmt(worst));
}

// --- 9 ---------------------------------------------------------------------
Atom random_atom(std::mt19937_64& rng, const LatticeCube& q, int k, int n) {
  const auto pts = cube_points(q);
  const auto ex = oracle::exponents(q.dim(), k - 1);
  Eigen::MatrixXd phi(static_cast<Eigen::Index>(pts.size()), static_cast<Eigen::Index>(ex.size()));
  for (std::size_t r = 0; r < pts.size(); ++r)
    for (std::size_t c = 0; c < ex.size(); ++c) {
      double m = 1;
      for (std::size_t i = 0; i < pts[r].size(); ++i) m *= std::pow(static_cast<double>(pts[r][i]) / (n - 1), ex[c][i]);
      phi(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = m;
    }
  Eigen::VectorXd v(static_cast<Eigen::Index>(pts.size()));
  for (auto& x : v) x = uniform(rng, -1, 1);
  for (int pass = 0; pass < 2; ++pass) v -= phi * phi.colPivHouseholderQr().solve(v);
  v *= uniform(rng, 0.3, 1.0) / v.cwiseAbs().sum();
  Atom a{q, {}};
  for (std::size_t r = 0; r < pts.size(); ++r) a.weights[pts[r]] = v[static_cast<Eigen::Index>(r)];
  return a;
}

void duality() {
  std::mt19937_64 rng(9);
  int pairs = 0, violations = 0, sandwich_bad = 0, sandwiches = 0;
  double worst = 1e300;
  for (std::uint64_t s = 0; pairs < 1000; ++s) {
    const int d = 1 + static_cast<int>(s % 2);
    const int n = 3 + static_cast<int>(s / 2 % 3);
    const int k = 1 + static_cast<int>(s / 6 % 2);
    const double p = 1.0 + static_cast<double>(s / 12 % 2);
    FamilyParams fp;
    fp.d = d;
    fp.n = n;
    const auto f = generate(rough_family(s), fp, s);
    Chain chain;
    const std::size_t need = static_cast<std::size_t>(polynomial_space_dim(d, k - 1)) + 1;
    auto cubes = enumerate_cubes(d, n);
    std::shuffle(cubes.begin(), cubes.end(), rng);
    const int want = uniform_int(rng, 1, 4);
    for (const auto& q : cubes) {
      if (static_cast<int>(chain.atoms.size()) == want) break;
      auto trial = chain.packing.cubes;
      trial.push_back(q);
      if (q.point_count() < need || !is_packing(trial)) continue;
      chain.packing.cubes.push_back(q);
      chain.atoms.push_back(random_atom(rng, q, k, n));
      chain.coefficients.push_back(uniform(rng, -3, 3));
    }
    if (chain.atoms.empty()) continue;
    const auto r = duality_check(f, chain, VariationParams{k, p});
    worst = std::min(worst, r.slack);
    if (!r.holds) ++violations;
    ++pairs;
    if (s % 10 == 0) {
      UNormOptions opts;
      opts.random_witnesses = 8;
      opts.seed = s;
      const auto g = chain_function(chain, d, n);
      const auto b = u_norm_bounds(g, VariationParams{k, p}, opts);
      ++sandwiches;
      if (b.lower > b.upper + 1e-10 * std::max(1.0, b.upper)) ++sandwich_bad;
    }
  }
  Eigen::VectorXd v = Eigen::VectorXd::Zero(7);
  v[1] = 1.0;
  v[5] = -1.0;
  const auto ex = u_norm_bounds(GridFunction(1, 7, v), VariationParams{1, 1.0});
  const bool example_ok = ex.lower >= 1 - 1e-12 && ex.upper <= 2 + 1e-12 && ex.lower <= ex.upper;
  report(9, violations == 0 && sandwich_bad == 0 && example_ok,
         std::to_string(pairs) + " (f, chain) pairs, " + std::to_string(violations) + " violations, min slack " +
             fmt(worst) + "; lower <= upper on " + std::to_string(sandwiches - sandwich_bad) + "/" +
             std::to_string(sandwiches) + "; delta_x - delta_y in [" + fmt(ex.lower) + ", " + fmt(ex.upper) + "]");
}

// --- 10 --------------------------------------------------------------------
void mixed_consistency() {
  std::mt19937_64 rng(10);
  int bad = 0;
  for (std::uint64_t s = 0; s < 500; ++s) {
    FamilyParams fp;
    fp.d = 1 + static_cast<int>(s % 3);
    fp.n = fp.d == 3 ? 4 : 3 + static_cast<int>(s / 3 % 4);
    const auto f = generate(rough_family(s), fp, s);
    const auto q = random_cube(rng, fp.d, fp.n);
    const int k = uniform_int(rng, 1, 3), axis = uniform_int(rng, 0, fp.d - 1);
    if (osc_mixed(f, q, unit_multi_index(fp.d, axis, k)) != osc_directional(f, q, k, axis)) ++bad;
  }
  report(10, bad == 0, "500 instances, " + std::to_string(bad) + " mismatches (exact comparison)");
}

// --- 11 --------------------------------------------------------------------
void minimax_lp() {
  std::mt19937_64 rng(11);
  int count = 0, bad = 0;
  double worst = 0.0;
  for (std::uint64_t s = 0; s < 600; ++s) {
    FamilyParams fp;
    fp.d = 1 + static_cast<int>(s % 2);
    fp.n = fp.d == 1 ? 3 + static_cast<int>(s / 2 % 10) : 3 + static_cast<int>(s / 2 % 3);
    const auto f = generate(rough_family(s / 2), fp, s);
    const auto q = random_cube(rng, fp.d, fp.n, fp.d == 1 ? 11 : 2);
    if (q.point_count() > 12) continue;
    const int k = 1 + static_cast<int>(s / 6 % 3);
    const double err = std::abs(local_approximation(f, q, k) - oracle::minimax(f, q, k));
    worst = std::max(worst, err);
    if (err > 1e-9) ++bad;
    ++count;
  }
  const auto sq = sample_grid(1, 3, [](const auto& x) { return x[0] * x[0]; });
  const double x2 = local_approximation(sq, whole_grid_cube(sq), 2);
  report(11, bad == 0 && x2 == 0.125,
         std::to_string(count) + " cubes with <= 12 points, max |LP - reference| = " + fmt(worst) +
             "; x^2 on 3 points = " + fmt(x2));
}

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  oracle_agreement();
  null_space();
  whitney_constants();
  monotone_telescoping();
  point_mass_sandwich();
  classical_golden();
  vitali_telescoping();
  lipschitz_embedding();
  duality();
  mixed_consistency();
  minimax_lp();
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("%d of 11 criteria failed (%.1f s)\n", failures, secs);
  return failures == 0 ? 0 : 1;
}
