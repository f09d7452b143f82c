#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "latvar/differences.hpp"
#include "latvar/families.hpp"
#include "latvar/local_approx.hpp"
#include "latvar/random.hpp"
#include "oracles.hpp"

using namespace latvar;

namespace {

GridFunction grid(int d, int n, const std::function<double(const std::vector<double>&)>& fn) {
  return sample_grid(d, n, fn);
}

double sup_diff(const GridFunction& a, const GridFunction& b) { return (a.values() - b.values()).cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("best_minimax_poly examples") {
  const auto sq = grid(1, 3, [](const auto& x) { return x[0] * x[0]; });
  const auto r = best_minimax_poly(sq, whole_grid_cube(sq), 2);
  CHECK(r.value == 0.125);
  CHECK(r.dual_value == doctest::Approx(0.125));
  // x - 1/8
  for (int i = 0; i < 3; ++i) CHECK(r.minimizer.at(sq, {i}) == doctest::Approx(i / 2.0 - 0.125));

  const auto two = grid(1, 2, [](const auto& x) { return x[0]; });
  const auto m = best_minimax_poly(two, whole_grid_cube(two), 1);
  CHECK(m.value == doctest::Approx(0.5));
  CHECK(m.minimizer.at(two, {0}) == doctest::Approx(0.5));

  const auto poly = grid(2, 4, [](const auto& x) { return 0.3 - x[0] + 2 * x[1]; });
  CHECK(local_approximation(poly, whole_grid_cube(poly), 2) <= 1e-12);
}

TEST_CASE("dual certificate of the LP") {
  for (int trial = 0; trial < 50; ++trial) {
    FamilyParams fp;
    fp.d = 1 + trial % 2;
    fp.n = 4;
    const auto f = generate("uniform", fp, static_cast<std::uint64_t>(trial));
    const int k = 1 + trial % 3;
    const auto r = best_minimax_poly(f, whole_grid_cube(f), k);
    double l1 = 0, pair = 0;
    for (const auto& [p, w] : r.extremal_weights) {
      l1 += std::abs(w);
      pair += w * f(p);
    }
    CHECK(l1 == doctest::Approx(1.0));
    CHECK(std::abs(pair) == doctest::Approx(r.value).epsilon(1e-9));
    for (const auto& p : r.certificate) CHECK(std::abs(f(p) - r.minimizer.at(f, p)) == doctest::Approx(r.value).epsilon(1e-9));
  }
}

TEST_CASE("LP agrees with the reference-subset oracle on small cubes") {
  std::mt19937_64 rng(5);
  int checked = 0;
  for (int trial = 0; trial < 300; ++trial) {
    FamilyParams fp;
    fp.d = 1 + trial % 2;
    fp.n = 3 + trial % 3;
    const auto f = generate(trial % 3 ? "uniform" : "lacunary", fp, static_cast<std::uint64_t>(trial));
    const int max_side = fp.d == 1 ? fp.n - 1 : 2;
    const int side = uniform_int(rng, 1, max_side);
    LatticeCube q{LatticePoint(static_cast<std::size_t>(fp.d)), side};
    for (auto& o : q.origin) o = uniform_int(rng, 0, fp.n - 1 - side);
    const int k = 1 + trial % 3;
    CAPTURE(trial);
    const double lp = local_approximation(f, q, k);
    CHECK(std::abs(lp - oracle::minimax(f, q, k)) <= 1e-9);
    CHECK(std::abs(lp - minimax_reference_value(f, q, k)) <= 1e-9);
    ++checked;
  }
  CHECK(checked == 300);
  const GridFunction big(2, 5, Eigen::VectorXd::Zero(25));
  CHECK_THROWS_AS(minimax_reference_value(big, whole_grid_cube(big), 1), GuardViolation);
}

TEST_CASE("interpolation") {
  const auto step = grid(1, 5, [](const auto& x) { return x[0] < 0.5 ? 0.0 : 1.0; });
  const auto c = interpolate_1d(step, {{0}, {4}}, 1);
  CHECK(c.at(step, {2}) == doctest::Approx(0.5));

  const auto sq = grid(1, 5, [](const auto& x) { return x[0] * x[0]; });
  const auto l = interpolate_1d(sq, {{0}, {4}}, 2);
  double err = 0;
  for (int i = 0; i < 5; ++i) {
    CHECK(l.at(sq, {i}) == doctest::Approx(i / 4.0));
    err = std::max(err, std::abs(sq(LatticePoint{i}) - l.at(sq, {i})));
  }
  CHECK(err == doctest::Approx(0.25));

  const auto q = grid(1, 7, [](const auto& x) { return 1 - x[0] + 3 * x[0] * x[0]; });
  const auto same = interpolate_1d(q, {{0}, {6}}, 3);
  for (int i = 0; i < 7; ++i) CHECK(same.at(q, {i}) == doctest::Approx(q(LatticePoint{i})));

  CHECK(interpolation_nodes(0, 4, 1) == std::vector<int>{0, 4});
  CHECK(interpolation_nodes(0, 4, 3) == std::vector<int>{0, 2, 4});
  CHECK(interpolation_operator_norm(5, 1) == doctest::Approx(1.0));
}

TEST_CASE("tensor projection") {
  const auto lin = grid(2, 4, [](const auto& x) { return 1 + 2 * x[0] - x[1]; });
  CHECK(sup_diff(tensor_projection(lin, MultiIndex{{2, 2}}), lin) <= 1e-12);

  const auto xy = grid(2, 2, [](const auto& x) { return x[0] * x[1]; });
  const auto t = tensor_projection(xy, MultiIndex{{1, 1}});
  for (std::size_t i = 0; i < 4; ++i) CHECK(t[i] == doctest::Approx(0.25));

  const auto f = generate("uniform", FamilyParams{2, 5}, 3);
  CHECK(sup_diff(tensor_projection(f, MultiIndex{{2, 3}}, std::vector<int>{0, 1}),
                 tensor_projection(f, MultiIndex{{2, 3}}, std::vector<int>{1, 0})) <= 1e-12);
}

TEST_CASE("mixed projection") {
  const auto sum = grid(2, 4, [](const auto& x) { return x[0] + x[1]; });
  CHECK(sup_diff(mixed_projection(sum, MultiIndex{{1, 1}}), sum) <= 1e-12);

  const auto xy = grid(2, 2, [](const auto& x) { return x[0] * x[1]; });
  const auto m = mixed_projection(xy, MultiIndex{{1, 1}});
  // the residual of xy on the 2 x 2 grid is (x - 1/2)(y - 1/2): +-1/4 at every corner
  for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(xy[i] - m[i]) == doctest::Approx(0.25));

  const auto rep = mixed_projection_report(grid(2, 5, [](const auto& x) { return std::sin(3 * x[0]) * x[1]; }),
                                           MultiIndex{{1, 1}});
  REQUIRE(rep.measured_constant);
  CHECK(*rep.measured_constant <= rep.operator_bound + 1e-12);
  CHECK(rep.residual_norm == doctest::Approx(*rep.measured_constant * rep.mixed_oscillation));
}

TEST_CASE("whitney projection and certificate") {
  const auto poly = grid(2, 5, [](const auto& x) { return 2 - x[0] + 0.5 * x[1]; });
  CHECK(sup_diff(whitney_projection(poly, 2), poly) <= 1e-10);

  const auto sq = grid(1, 3, [](const auto& x) { return x[0] * x[0]; });
  const auto w = whitney_projection(sq, 2);
  CHECK(sup_diff(w, sq) == doctest::Approx(0.25));
  CHECK(local_approximation(sq, whole_grid_cube(sq), 2) <= sup_diff(w, sq));

  const auto cert = whitney_certificate(poly, whole_grid_cube(poly), 2);
  CHECK_FALSE(cert.ratio);
  CHECK(cert.lower_bound_holds);

  // midrange identity: osc_1 = 2 E_1 on any 1-d set
  const auto f = generate("uniform", FamilyParams{1, 5}, 9);
  const auto c1 = whitney_certificate(f, whole_grid_cube(f), 1);
  REQUIRE(c1.ratio);
  CHECK(*c1.ratio == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(whitney_enumeration(2, 2).size() == 3);
}
