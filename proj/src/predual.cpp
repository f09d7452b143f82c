#include "latvar/predual.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <sstream>

#include <Eigen/Dense>

#include "latvar/differences.hpp"
#include "latvar/multi_index.hpp"
#include "latvar/polynomial.hpp"
#include "latvar/random.hpp"

namespace latvar {

namespace {

constexpr double kAtomTol = 1e-12;

std::vector<double> coords(const LatticePoint& p, int n) {
  std::vector<double> x(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) x[i] = static_cast<double>(p[i]) / (n - 1);
  return x;
}

double monomial(const MultiIndex& a, const std::vector<double>& x) {
  double v = 1.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (int e = 0; e < a.entries[i]; ++e) v *= x[i];
  return v;
}

double weights_max_moment(const PointWeights& w, int k, int n, int d) {
  double worst = 0.0;
  for (const auto& a : multi_indices_up_to(d, k - 1)) {
    CompensatedSum s;
    for (const auto& [p, v] : w) s.add(v * monomial(a, coords(p, n)));
    worst = std::max(worst, std::abs(s.value()));
  }
  return worst;
}

double l1(const PointWeights& w) {
  double s = 0.0;
  for (const auto& [p, v] : w) s += std::abs(v);
  return s;
}

bool in_cube(const LatticeCube& q, const LatticePoint& p) { return p.size() == q.origin.size() && q.contains(p); }

// Smallest cube inside the grid containing every point.
LatticeCube enclosing_cube(const std::vector<LatticePoint>& pts, int n) {
  const std::size_t d = pts.front().size();
  LatticePoint lo = pts.front(), hi = pts.front();
  for (const auto& p : pts)
    for (std::size_t i = 0; i < d; ++i) {
      lo[i] = std::min(lo[i], p[i]);
      hi[i] = std::max(hi[i], p[i]);
    }
  int side = 1;
  for (std::size_t i = 0; i < d; ++i) side = std::max(side, hi[i] - lo[i]);
  LatticeCube q{lo, side};
  for (std::size_t i = 0; i < d; ++i) q.origin[i] = std::max(0, std::min(lo[i], n - 1 - side));
  return q;
}

std::vector<LatticePoint> keys(const PointWeights& w) {
  std::vector<LatticePoint> out;
  for (const auto& [p, v] : w) out.push_back(p);
  return out;
}

Chain single_atom_chain(const PointWeights& w, int n) {
  const double mass = l1(w);
  Atom a{enclosing_cube(keys(w), n), {}};
  for (const auto& [p, v] : w) a.weights[p] = v / mass;
  return Chain{Packing{{a.support_cube}}, {a}, {mass}};
}

// Row-wise interpolation matrix in a local basis around the bounding box of pts.
Eigen::MatrixXd interpolation_matrix(const std::vector<LatticePoint>& pts, const std::vector<MultiIndex>& basis, int n,
                                     std::vector<double>& center, double& scale) {
  const std::size_t d = pts.front().size();
  std::vector<double> lo(d, 1e300), hi(d, -1e300);
  for (const auto& p : pts) {
    const auto x = coords(p, n);
    for (std::size_t i = 0; i < d; ++i) {
      lo[i] = std::min(lo[i], x[i]);
      hi[i] = std::max(hi[i], x[i]);
    }
  }
  center.assign(d, 0.0);
  scale = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    center[i] = 0.5 * (lo[i] + hi[i]);
    scale = std::max(scale, hi[i] - lo[i]);
  }
  if (!(scale > 0.0)) scale = 1.0;
  std::vector<std::vector<double>> xs;
  for (const auto& p : pts) xs.push_back(coords(p, n));
  return local_basis_matrix(xs, basis, center, scale);
}

double reciprocal_condition(const Eigen::MatrixXd& a) {
  if (a.size() == 0) return 1.0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
  const auto& s = svd.singularValues();
  if (!(s[0] > 0.0)) return 0.0;
  return s[s.size() - 1] / s[0];
}

// Greedy unisolvent set: support points first, then grid points by distance
// from the support's bounding box center.
std::optional<std::vector<LatticePoint>> unisolvent_set(const std::vector<LatticePoint>& support, int k, int n, int d) {
  const auto basis = multi_indices_up_to(d, k - 1);
  const std::size_t m = basis.size();
  std::vector<LatticePoint> cand = support;
  {
    std::vector<double> c(static_cast<std::size_t>(d), 0.0);
    for (const auto& p : support)
      for (int i = 0; i < d; ++i) c[static_cast<std::size_t>(i)] += p[static_cast<std::size_t>(i)];
    for (auto& v : c) v /= static_cast<double>(support.size());
    std::vector<LatticePoint> rest;
    LatticeCube all{LatticePoint(static_cast<std::size_t>(d), 0), n - 1};
    for (auto& p : cube_points(all))
      if (std::find(support.begin(), support.end(), p) == support.end()) rest.push_back(p);
    auto dist = [&](const LatticePoint& p) {
      double s = 0.0;
      for (int i = 0; i < d; ++i) s += std::pow(p[static_cast<std::size_t>(i)] - c[static_cast<std::size_t>(i)], 2);
      return s;
    };
    std::stable_sort(rest.begin(), rest.end(), [&](const auto& a, const auto& b) { return dist(a) < dist(b); });
    cand.insert(cand.end(), rest.begin(), rest.end());
  }
  std::vector<LatticePoint> chosen;
  for (const auto& p : cand) {
    if (chosen.size() == m) break;
    auto trial = chosen;
    trial.push_back(p);
    std::vector<double> center;
    double scale = 1.0;
    const Eigen::MatrixXd a = interpolation_matrix(trial, basis, n, center, scale);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
    const auto& s = svd.singularValues();
    if (s[s.size() - 1] > 1e-9 * s[0]) chosen = std::move(trial);
  }
  if (chosen.size() != m) return std::nullopt;
  return chosen;
}

GridFunction from_weights(const PointWeights& w, int d, int n) {
  std::size_t total = 1;
  for (int i = 0; i < d; ++i) total *= static_cast<std::size_t>(n);
  Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(total));
  GridFunction shape(d, n, v);
  for (const auto& [p, x] : w) v[static_cast<Eigen::Index>(shape.linear_index(p))] += x;
  return GridFunction(d, n, std::move(v));
}

double pairing(const GridFunction& f, const GridFunction& g) {
  CompensatedSum s;
  for (std::size_t i = 0; i < f.size(); ++i) s.add(f[i] * g[i]);
  return s.value();
}

}  // namespace

AtomDiagnostics validate_atom(const Atom& atom, int k, int n) {
  AtomDiagnostics diag;
  const int d = atom.support_cube.dim();
  if (k < 1) throw InvalidArgument("validate_atom: order must be >= 1");
  diag.support_ok = atom.support_cube.side >= 1 && atom.support_cube.fits(d, n);
  if (!diag.support_ok) diag.problems.push_back("support cube " + to_string(atom.support_cube) + " is not inside the grid");
  for (const auto& [p, v] : atom.weights) {
    if (!in_cube(atom.support_cube, p)) {
      diag.support_ok = false;
      diag.problems.push_back("weight outside the support cube");
      break;
    }
  }
  diag.l1_norm = l1(atom.weights);
  diag.l1_ok = diag.l1_norm <= 1.0 + kAtomTol;
  if (!diag.l1_ok) {
    std::ostringstream os;
    os << "l1 norm " << diag.l1_norm << " exceeds 1";
    diag.problems.push_back(os.str());
  }
  diag.max_moment = diag.support_ok ? weights_max_moment(atom.weights, k, n, d) : 0.0;
  diag.moments_ok = diag.support_ok && diag.max_moment <= kAtomTol;
  if (diag.support_ok && !diag.moments_ok) {
    std::ostringstream os;
    os << "moment of size " << diag.max_moment << " against degree <= " << k - 1 << " monomials";
    diag.problems.push_back(os.str());
  }
  diag.valid = diag.support_ok && diag.l1_ok && diag.moments_ok;
  return diag;
}

double conjugate_exponent(double p) {
  if (!(p >= 1.0)) throw InvalidArgument("conjugate_exponent: need p >= 1");
  if (p == 1.0) return std::numeric_limits<double>::infinity();
  if (std::isinf(p)) return 1.0;
  return p / (p - 1.0);
}

double chain_norm(const Chain& chain, double p) {
  const double q = conjugate_exponent(p);
  if (std::isinf(q)) {
    double m = 0.0;
    for (double c : chain.coefficients) m = std::max(m, std::abs(c));
    return m;
  }
  double s = 0.0;
  for (double c : chain.coefficients) s += std::pow(std::abs(c), q);
  return std::pow(s, 1.0 / q);
}

AtomDiagnostics validate_chain(const Chain& chain, int k, int n) {
  AtomDiagnostics diag;
  diag.support_ok = diag.l1_ok = diag.moments_ok = true;
  if (chain.atoms.size() != chain.packing.cubes.size() || chain.coefficients.size() != chain.atoms.size()) {
    diag.support_ok = false;
    diag.problems.push_back("chain needs one atom and one coefficient per cube");
  } else if (!is_packing(chain.packing)) {
    diag.support_ok = false;
    diag.problems.push_back("chain cubes do not form a packing");
  } else {
    for (std::size_t i = 0; i < chain.atoms.size(); ++i) {
      if (!(chain.atoms[i].support_cube == chain.packing.cubes[i])) {
        diag.support_ok = false;
        diag.problems.push_back("atom " + std::to_string(i) + " is not supported on its packing cube");
      }
      const auto a = validate_atom(chain.atoms[i], k, n);
      diag.support_ok = diag.support_ok && a.support_ok;
      diag.l1_ok = diag.l1_ok && a.l1_ok;
      diag.moments_ok = diag.moments_ok && a.moments_ok;
      diag.l1_norm = std::max(diag.l1_norm, a.l1_norm);
      diag.max_moment = std::max(diag.max_moment, a.max_moment);
      for (const auto& msg : a.problems) diag.problems.push_back("atom " + std::to_string(i) + ": " + msg);
    }
  }
  diag.valid = diag.support_ok && diag.l1_ok && diag.moments_ok;
  return diag;
}

GridFunction chain_function(const Chain& chain, int d, int n) {
  PointWeights w;
  for (std::size_t i = 0; i < chain.atoms.size(); ++i)
    for (const auto& [p, v] : chain.atoms[i].weights) w[p] += chain.coefficients[i] * v;
  return from_weights(w, d, n);
}

PointWeights delta_correction(const LatticePoint& x, const std::vector<LatticePoint>& points, int k, int n) {
  if (k < 1) throw InvalidArgument("delta_correction: order must be >= 1");
  if (points.empty()) throw InvalidArgument("delta_correction: interpolation set is empty");
  const int d = static_cast<int>(x.size());
  for (const auto& s : points)
    if (static_cast<int>(s.size()) != d) throw InvalidArgument("delta_correction: point dimension mismatch");
  const auto basis = multi_indices_up_to(d, k - 1);
  if (points.size() != basis.size()) {
    std::ostringstream os;
    os << "delta_correction: S has " << points.size() << " points, interpolation needs exactly " << basis.size();
    throw InvalidArgument(os.str());
  }
  std::vector<double> center;
  double scale = 1.0;
  auto all = points;
  all.push_back(x);
  interpolation_matrix(all, basis, n, center, scale);
  std::vector<std::vector<double>> xs;
  for (const auto& s : points) xs.push_back(coords(s, n));
  const Eigen::MatrixXd a = local_basis_matrix(xs, basis, center, scale);
  if (reciprocal_condition(a) < 1e-9) throw InvalidArgument("delta_correction: S is not unisolvent for the polynomial space");
  if (std::find(points.begin(), points.end(), x) != points.end()) return {};
  const Eigen::MatrixXd phi_x = local_basis_matrix({coords(x, n)}, basis, center, scale);
  const Eigen::VectorXd c = a.transpose().fullPivLu().solve(phi_x.row(0).transpose());
  PointWeights out;
  out[x] = 1.0;
  for (std::size_t i = 0; i < points.size(); ++i) out[points[i]] -= c[static_cast<Eigen::Index>(i)];
  for (auto it = out.begin(); it != out.end();) it = std::abs(it->second) <= 1e-15 ? out.erase(it) : std::next(it);
  return out;
}

double max_moment(const GridFunction& g, int k) {
  PointWeights w;
  for (std::size_t i = 0; i < g.size(); ++i)
    if (g[i] != 0.0) w[g.point(i)] = g[i];
  return weights_max_moment(w, k, g.points_per_axis(), g.dim());
}

double decomposition_norm(const std::vector<Chain>& chains, double p) {
  double s = 0.0;
  for (const auto& c : chains) s += chain_norm(c, p);
  return s;
}

namespace {

// Set partitions of {0..m-1} as group labels (restricted growth strings).
void for_each_partition(std::size_t m, const std::function<void(const std::vector<int>&, int)>& fn) {
  std::vector<int> label(m, 0);
  std::function<void(std::size_t, int)> rec = [&](std::size_t i, int groups) {
    if (i == m) {
      fn(label, groups);
      return;
    }
    for (int g = 0; g <= groups; ++g) {
      label[i] = g;
      rec(i + 1, std::max(groups, g + 1));
    }
  };
  rec(0, 0);
}

// All grid cubes of the minimal side containing every point.
std::vector<LatticeCube> minimal_containing_cubes(const std::vector<LatticePoint>& pts, int n) {
  const LatticeCube base = enclosing_cube(pts, n);
  const std::size_t d = pts.front().size();
  std::vector<LatticeCube> out;
  LatticeCube all{LatticePoint(d, 0), n - 1 - base.side};
  if (all.side == 0) return {base};
  for (auto origin : cube_points(all)) {
    LatticeCube q{origin, base.side};
    if (std::all_of(pts.begin(), pts.end(), [&](const LatticePoint& p) { return q.contains(p); })) out.push_back(q);
  }
  return out;
}

std::optional<Chain> partition_chain(const std::vector<std::vector<LatticePoint>>& groups, const PointWeights& g,
                                     int n) {
  std::vector<std::vector<LatticeCube>> options;
  for (const auto& grp : groups) options.push_back(minimal_containing_cubes(grp, n));
  std::vector<LatticeCube> pick(groups.size());
  std::function<bool(std::size_t)> place = [&](std::size_t i) -> bool {
    if (i == groups.size()) return true;
    for (const auto& q : options[i]) {
      pick[i] = q;
      if (is_packing(std::span<const LatticeCube>(pick.data(), i + 1)) && place(i + 1)) return true;
    }
    return false;
  };
  if (!place(0)) return std::nullopt;
  Chain c;
  for (std::size_t i = 0; i < groups.size(); ++i) {
    PointWeights w;
    for (const auto& p : groups[i]) w[p] = g.at(p);
    const double mass = l1(w);
    Atom a{pick[i], {}};
    for (const auto& [p, v] : w) a.weights[p] = v / mass;
    c.packing.cubes.push_back(pick[i]);
    c.atoms.push_back(std::move(a));
    c.coefficients.push_back(mass);
  }
  return c;
}

}  // namespace

UNormBounds u_norm_bounds(const GridFunction& g, const VariationParams& params, const UNormOptions& opts) {
  params.validate();
  const int d = g.dim();
  const int n = g.points_per_axis();
  const int k = params.k;
  UNormBounds out;
  out.witness_function = GridFunction(d, n, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(g.size())));

  PointWeights gw;
  for (std::size_t i = 0; i < g.size(); ++i)
    if (g[i] != 0.0) gw[g.point(i)] = g[i];
  const double scale = std::max(1.0, g.sup_norm());
  const double mom = max_moment(g, k);
  if (mom > 1e-10 * scale) {
    std::ostringstream os;
    os << "u_norm_bounds: moments through degree " << k - 1 << " do not vanish (max " << mom << ")";
    throw InvalidArgument(os.str());
  }
  if (gw.empty()) {
    out.upper_source = out.lower_source = "zero";
    return out;
  }
  if (gw.size() > opts.max_support && !opts.allow_large) {
    std::ostringstream os;
    os << "u_norm_bounds: support has " << gw.size() << " points, above the cap of " << opts.max_support
       << " for exact search; raise the cap or pass the override";
    throw GuardViolation(os.str());
  }
  check_exhaustive_guard(d, n, opts.allow_large, "u_norm_bounds");
  const auto support = keys(gw);

  // Upper bound candidates.
  std::vector<Chain> best = {single_atom_chain(gw, n)};
  double best_norm = decomposition_norm(best, params.p);
  out.upper_source = "single_atom";

  if (support.size() <= 8) {
    for_each_partition(support.size(), [&](const std::vector<int>& label, int groups) {
      if (groups < 2) return;
      std::vector<std::vector<LatticePoint>> parts(static_cast<std::size_t>(groups));
      for (std::size_t i = 0; i < support.size(); ++i) parts[static_cast<std::size_t>(label[i])].push_back(support[i]);
      for (const auto& part : parts) {
        PointWeights w;
        for (const auto& p : part) w[p] = gw.at(p);
        if (weights_max_moment(w, k, n, d) > 1e-10 * scale) return;
      }
      auto chain = partition_chain(parts, gw, n);
      if (!chain) return;
      const double v = chain_norm(*chain, params.p);
      if (v < best_norm - 1e-14 * best_norm) {
        best = {std::move(*chain)};
        best_norm = v;
        out.upper_source = "partition";
      }
    });
  }

  const auto sset = unisolvent_set(support, k, n, d);
  std::vector<PointWeights> corrections;
  if (sset) {
    std::vector<Chain> chains;
    PointWeights recon;
    for (const auto& x : support) {
      auto dc = delta_correction(x, *sset, k, n);
      if (dc.empty()) continue;
      corrections.push_back(dc);
      PointWeights scaled;
      for (const auto& [p, v] : dc) {
        scaled[p] = gw.at(x) * v;
        recon[p] += gw.at(x) * v;
      }
      chains.push_back(single_atom_chain(scaled, n));
    }
    double err = 0.0;
    for (const auto& [p, v] : recon) err = std::max(err, std::abs(v - (gw.count(p) ? gw.at(p) : 0.0)));
    for (const auto& [p, v] : gw) err = std::max(err, std::abs(v - (recon.count(p) ? recon.at(p) : 0.0)));
    if (!chains.empty() && err <= 1e-9 * scale) {
      const double v = decomposition_norm(chains, params.p);
      if (v < best_norm - 1e-14 * best_norm) {
        best = std::move(chains);
        best_norm = v;
        out.upper_source = "delta_correction";
      }
    }
  }
  out.witness_decomposition = std::move(best);
  out.upper = decomposition_norm(out.witness_decomposition, params.p);

  // Lower bound witnesses.
  std::vector<std::pair<std::string, PointWeights>> witnesses;
  for (const auto& x : support) witnesses.push_back({"point_mass", PointWeights{{x, 1.0}}});
  for (std::size_t i = 0; i < support.size(); ++i)
    for (std::size_t j = i + 1; j < support.size(); ++j) {
      witnesses.push_back({"pair", PointWeights{{support[i], 1.0}, {support[j], -1.0}}});
      witnesses.push_back({"pair", PointWeights{{support[i], 1.0}, {support[j], 1.0}}});
    }
  for (const auto& c : corrections) witnesses.push_back({"delta_correction", c});
  {
    PointWeights sg;
    for (const auto& [p, v] : gw) sg[p] = v > 0 ? 1.0 : -1.0;
    witnesses.push_back({"sign", sg});
    witnesses.push_back({"self", gw});
  }
  std::mt19937_64 rng(opts.seed);
  for (int r = 0; r < opts.random_witnesses; ++r) {
    PointWeights w;
    if (r % 2 == 0) {
      for (const auto& p : support) w[p] = uniform(rng, -1.0, 1.0);
      witnesses.push_back({"random_support", std::move(w)});
    } else {
      for (std::size_t i = 0; i < g.size(); ++i) w[g.point(i)] = uniform(rng, -1.0, 1.0);
      witnesses.push_back({"random_grid", std::move(w)});
    }
  }
  for (auto& [name, w] : witnesses) {
    GridFunction f = from_weights(w, d, n);
    const double var = variation_bruteforce(f, params, opts.allow_large).value;
    if (!(var > 1e-12)) continue;
    const double q = std::abs(pairing(f, g)) / var;
    if (q > out.lower) {
      out.lower = q;
      out.witness_function = std::move(f);
      out.lower_source = name;
    }
  }
  return out;
}

DualityReport duality_check(const GridFunction& f, const Chain& chain, const VariationParams& params,
                            bool allow_large) {
  params.validate();
  const auto diag = validate_chain(chain, params.k, f.points_per_axis());
  if (!diag.valid) throw InvalidArgument("duality_check: invalid chain: " + diag.problems.front());
  DualityReport r;
  const GridFunction b = chain_function(chain, f.dim(), f.points_per_axis());
  r.pairing = std::abs(pairing(f, b));
  r.chain_norm = chain_norm(chain, params.p);
  r.variation = variation_bruteforce(f, params, allow_large).value;
  r.rhs = r.chain_norm * r.variation;
  r.slack = r.rhs - r.pairing;
  r.tolerance = 1e-10 * std::max({1.0, r.rhs, r.pairing});
  r.holds = r.pairing <= r.rhs + r.tolerance;
  return r;
}

}  // namespace latvar
