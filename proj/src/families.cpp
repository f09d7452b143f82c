#include "latvar/families.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "latvar/multi_index.hpp"
#include "latvar/random.hpp"

namespace latvar {

const std::vector<std::string>& family_names() {
  static const std::vector<std::string> names = {"polynomial", "monotone-walk", "lacunary", "point-masses",
                                                 "separable",  "checkerboard",  "uniform"};
  return names;
}

bool is_family(const std::string& name) {
  const auto& v = family_names();
  return std::find(v.begin(), v.end(), name) != v.end();
}

namespace {

std::uint64_t mix(const std::string& name, std::uint64_t seed) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : name) h = (h ^ c) * 1099511628211ull;
  return h ^ (seed * 0x9e3779b97f4a7c15ull);
}

std::size_t total_points(int d, int n) {
  std::size_t t = 1;
  for (int i = 0; i < d; ++i) t *= static_cast<std::size_t>(n);
  return t;
}

GridFunction point_masses(const FamilyParams& fp, std::mt19937_64& rng) {
  const int d = fp.d, n = fp.n;
  if (n < 3) throw InvalidArgument("point-masses: need n >= 3 for interior points");
  if (fp.support < 0) throw InvalidArgument("point-masses: support must be >= 0");
  Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(total_points(d, n)));
  GridFunction shape(d, n, v);
  auto admissible = [&](const LatticePoint& p, const std::vector<LatticePoint>& chosen) {
    return std::all_of(chosen.begin(), chosen.end(), [&](const LatticePoint& q) {
      int dist = 0;
      for (std::size_t i = 0; i < p.size(); ++i) dist = std::max(dist, std::abs(p[i] - q[i]));
      return fp.separated ? dist >= 2 : dist >= 1;
    });
  };
  // Random greedy placement, restarted when it gets stuck.
  std::vector<LatticePoint> chosen;
  for (int restart = 0;; ++restart) {
    if (restart > 1000) throw InvalidArgument("point-masses: cannot place the requested number of points");
    chosen.clear();
    for (int attempt = 0; static_cast<int>(chosen.size()) < fp.support && attempt < 200; ++attempt) {
      LatticePoint p(static_cast<std::size_t>(d));
      for (auto& c : p) c = uniform_int(rng, 1, n - 2);
      if (admissible(p, chosen)) chosen.push_back(p);
    }
    if (static_cast<int>(chosen.size()) == fp.support) break;
  }
  for (const auto& p : chosen) {
    const double mag = uniform(rng, 0.5, 1.0);
    v[static_cast<Eigen::Index>(shape.linear_index(p))] = uniform01(rng) < 0.5 ? -mag : mag;
  }
  return GridFunction(d, n, std::move(v));
}

}  // namespace

GridFunction generate(const std::string& family, const FamilyParams& fp, std::uint64_t seed) {
  if (!is_family(family)) throw InvalidArgument("unknown function family '" + family + "'");
  if (fp.d < 1 || fp.n < 2) throw InvalidArgument("generate: need d >= 1 and n >= 2");
  std::mt19937_64 rng(mix(family, seed));
  const int d = fp.d, n = fp.n;

  if (family == "polynomial") {
    if (fp.degree < 0) throw InvalidArgument("polynomial: degree must be >= 0");
    std::vector<std::pair<MultiIndex, double>> terms;
    for (auto& a : multi_indices_up_to(d, fp.degree)) terms.emplace_back(a, uniform(rng, -1.0, 1.0));
    return sample_grid(d, n, [&](const std::vector<double>& x) {
      double s = 0.0;
      for (const auto& [a, c] : terms) {
        double m = c;
        for (std::size_t i = 0; i < x.size(); ++i)
          for (int e = 0; e < a.entries[i]; ++e) m *= x[i];
        s += m;
      }
      return s;
    });
  }
  if (family == "monotone-walk") {
    if (d != 1) throw InvalidArgument("monotone-walk: only d = 1");
    Eigen::VectorXd v(n);
    v[0] = uniform(rng, -1.0, 1.0);
    for (int i = 1; i < n; ++i) v[i] = v[i - 1] + uniform01(rng);
    return GridFunction(1, n, std::move(v));
  }
  if (family == "lacunary") {
    std::vector<double> phase(static_cast<std::size_t>(std::max(fp.terms, 0)));
    for (auto& ph : phase) ph = uniform(rng, 0.0, 2.0 * std::numbers::pi);
    return sample_grid(d, n, [&](const std::vector<double>& x) {
      double t = 0.0;
      for (double xi : x) t += xi;
      double s = 0.0;
      for (std::size_t j = 0; j < phase.size(); ++j)
        s += std::pow(2.0, -static_cast<double>(j) * fp.exponent) *
             std::cos(std::ldexp(std::numbers::pi, static_cast<int>(j)) * t + phase[j]);
      return s;
    });
  }
  if (family == "point-masses") return point_masses(fp, rng);
  if (family == "separable") {
    std::vector<std::vector<double>> factors(static_cast<std::size_t>(d), std::vector<double>(static_cast<std::size_t>(n)));
    for (auto& f : factors)
      for (auto& v : f) v = uniform(rng, -1.0, 1.0);
    Eigen::VectorXd v(static_cast<Eigen::Index>(total_points(d, n)));
    for (std::size_t lin = 0; lin < total_points(d, n); ++lin) {
      std::size_t rem = lin;
      double prod = 1.0;
      for (int a = d - 1; a >= 0; --a) {
        prod *= factors[static_cast<std::size_t>(a)][rem % static_cast<std::size_t>(n)];
        rem /= static_cast<std::size_t>(n);
      }
      v[static_cast<Eigen::Index>(lin)] = prod;
    }
    return GridFunction(d, n, std::move(v));
  }
  if (family == "checkerboard") {
    const int blocks = uniform_int(rng, 2, n);
    const double amp = uniform(rng, 0.5, 2.0);
    Eigen::VectorXd v(static_cast<Eigen::Index>(total_points(d, n)));
    for (std::size_t lin = 0; lin < total_points(d, n); ++lin) {
      std::size_t rem = lin;
      int parity = 0;
      for (int a = 0; a < d; ++a) {
        const int idx = static_cast<int>(rem % static_cast<std::size_t>(n));
        rem /= static_cast<std::size_t>(n);
        parity += idx * blocks / n;
      }
      v[static_cast<Eigen::Index>(lin)] = parity % 2 ? amp : 0.0;
    }
    return GridFunction(d, n, std::move(v));
  }
  // uniform
  Eigen::VectorXd v(static_cast<Eigen::Index>(total_points(d, n)));
  for (auto& x : v) x = uniform(rng, -1.0, 1.0);
  return GridFunction(d, n, std::move(v));
}

}  // namespace latvar
