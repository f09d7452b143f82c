#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "latvar/differences.hpp"
#include "latvar/families.hpp"
#include "latvar/random.hpp"
#include "oracles.hpp"

using namespace latvar;

namespace {

GridFunction sample1(int n, double (*fn)(double)) {
  return sample_grid(1, n, [&](const std::vector<double>& x) { return fn(x[0]); });
}

}  // namespace

TEST_CASE("finite_difference examples") {
  const auto lin = sample1(5, [](double x) { return x; });
  CHECK(finite_difference(lin, {0}, StepVector{{1}}, 1) == doctest::Approx(0.25));
  const auto sq = sample1(3, [](double x) { return x * x; });
  CHECK(finite_difference(sq, {0}, StepVector{{1}}, 2) == doctest::Approx(0.5));
  CHECK(finite_difference(sq, {1}, StepVector{{0}}, 1) == 0.0);
  CHECK_THROWS_AS(finite_difference(sq, {1}, StepVector{{1}}, 2), InvalidArgument);
}

TEST_CASE("osc_k examples") {
  const GridFunction c(2, 4, Eigen::VectorXd::Constant(16, 3.0));
  CHECK(osc_k(c, whole_grid_cube(c), 1) == 0.0);
  const auto sq = sample1(5, [](double x) { return x * x; });
  CHECK(osc_k(sq, whole_grid_cube(sq), 2) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(osc_k(sq, whole_grid_cube(sq), 3) <= 1e-12);
  const auto lin2 = sample_grid(2, 5, [](const std::vector<double>& x) { return 1 - 2 * x[0] + 0.5 * x[1]; });
  CHECK(osc_k(lin2, whole_grid_cube(lin2), 2) <= 1e-12);
}

TEST_CASE("osc_directional and osc_mixed examples") {
  const auto y = sample_grid(2, 4, [](const std::vector<double>& x) { return x[1]; });
  const auto xf = sample_grid(2, 4, [](const std::vector<double>& x) { return x[0]; });
  CHECK(osc_directional(y, whole_grid_cube(y), 1, 0) == 0.0);
  CHECK(osc_directional(xf, whole_grid_cube(xf), 1, 0) == doctest::Approx(1.0));
  const auto sum = sample_grid(2, 4, [](const std::vector<double>& x) { return x[0] + x[1]; });
  CHECK(osc_mixed(sum, whole_grid_cube(sum), MultiIndex{{1, 1}}) <= 1e-15);
  const auto xy = sample_grid(2, 3, [](const std::vector<double>& x) { return x[0] * x[1]; });
  CHECK(osc_mixed(xy, whole_grid_cube(xy), MultiIndex{{1, 1}}) == doctest::Approx(1.0));
}

TEST_CASE("osc_k matches the naive oracle") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    FamilyParams fp;
    fp.d = 1 + trial % 2;
    fp.n = 3 + trial % 3;
    const auto f = generate("uniform", fp, static_cast<std::uint64_t>(trial));
    const int side = uniform_int(rng, 1, fp.n - 1);
    LatticeCube q{LatticePoint(static_cast<std::size_t>(fp.d)), side};
    for (auto& o : q.origin) o = uniform_int(rng, 0, fp.n - 1 - side);
    const int k = 1 + trial % 3;
    CAPTURE(trial);
    CHECK(osc_k(f, q, k) == doctest::Approx(oracle::osc(f, q, k)).epsilon(1e-13));
  }
}

TEST_CASE("mixed at k e_i is directional, exactly") {
  for (int trial = 0; trial < 100; ++trial) {
    FamilyParams fp;
    fp.d = 2;
    fp.n = 3 + trial % 3;
    const auto f = generate("lacunary", fp, static_cast<std::uint64_t>(trial));
    const int k = 1 + trial % 2, axis = trial % 2;
    CHECK(osc_mixed(f, whole_grid_cube(f), unit_multi_index(2, axis, k)) == osc_directional(f, whole_grid_cube(f), k, axis));
  }
}

TEST_CASE("binomial and compensated sum") {
  CHECK(binomial(5, 2) == 10.0);
  CHECK(binomial(4, 0) == 1.0);
  CompensatedSum s;
  s.add(1e16);
  s.add(1.0);
  s.add(-1e16);
  CHECK(s.value() == 1.0);
}
