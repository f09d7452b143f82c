#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "latvar/classical.hpp"
#include "latvar/cli.hpp"
#include "latvar/grid_io.hpp"
#include "latvar/variation.hpp"

using namespace latvar;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
  json report() const { return json::parse(out); }
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "latvar");
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string write_grid(const std::string& name, const GridFunction& f) {
  const auto path = (fs::temp_directory_path() / ("latvar_cli_" + name + ".json")).string();
  std::ofstream(path) << grid_to_json(f).dump();
  return path;
}

GridFunction xy(int n) { return sample_grid(2, n, [](const auto& x) { return x[0] * x[1]; }); }

}  // namespace

TEST_CASE("var on a monotone walk and a polynomial") {
  const auto walk = GridFunction(1, 5, (Eigen::VectorXd(5) << 0, 0.1, 0.5, 0.6, 1.2).finished());
  const auto path = write_grid("walk", walk);
  const auto r = run({"var", path, "--k", "1", "--p", "1", "--method", "brute", "--weight", "osc_k"});
  REQUIRE(r.code == 0);
  const auto j = r.report();
  CHECK(j.at("value").get<double>() == doctest::Approx(1.2).epsilon(1e-14));
  CHECK(j.at("is_exact") == true);
  CHECK(j.at("smoothness") == 1.0);
  CHECK(j.at("optimizer").is_array());

  const auto poly = write_grid("poly", sample_grid(2, 4, [](const auto& x) { return 2 + x[0] - x[1]; }));
  CHECK(run({"var", poly, "--k", "2"}).report().at("value").get<double>() <= 1e-8);
}

TEST_CASE("var numbers match the library") {
  const auto f = sample_grid(1, 5, [](const auto& x) { return std::sin(5 * x[0]); });
  const auto path = write_grid("sin", f);
  const VariationParams vp{1, 2.0};
  CHECK(run({"var", path, "--p", "2"}).report().at("value").get<double>() == variation_bruteforce(f, vp).value);
  CHECK(run({"var", path, "--p", "2", "--mesh-cap", "0.25"}).report().at("value").get<double>() ==
        restricted_variation(f, vp, 0.25));
  CHECK(run({"var", path, "--p", "2", "--volume-cap", "0.5"}).report().at("value").get<double>() == ac_modulus(f, vp, 0.5));
  CHECK(run({"var", path, "--method", "dyadic"}).report().at("value").get<double>() ==
        variation_dyadic(f, VariationParams{}).value);
}

TEST_CASE("outputs are byte-identical across runs") {
  const auto path = write_grid("xy", xy(5));
  const auto a = run({"var", path, "--k", "2", "--p", "1.5"});
  CHECK(a.out == run({"var", path, "--k", "2", "--p", "1.5"}).out);
  const auto s1 = run({"suite", "--seeds", "2", "--no-timing"});
  CHECK(s1.code == 0);
  CHECK(s1.out == run({"suite", "--seeds", "2", "--no-timing"}).out);
}

TEST_CASE("classical notions") {
  const auto path = write_grid("xy5", xy(5));
  CHECK(run({"classical", path, "--notion", "vitali"}).report().at("value").get<double>() == doctest::Approx(1.0));
  CHECK(run({"classical", path, "--notion", "hardy_krause", "--anchor", "ones"}).report().at("value").get<double>() ==
        doctest::Approx(3.0));
  CHECK(run({"classical", path, "--notion", "hardy_krause", "--anchor", "0,0"}).report().at("value").get<double>() ==
        doctest::Approx(1.0));
  const auto sum = write_grid("sum", sample_grid(2, 5, [](const auto& x) { return x[0] + x[1]; }));
  CHECK(run({"classical", sum, "--notion", "tonelli"}).report().at("value").get<double>() == doctest::Approx(2.0));

  const auto line = write_grid("line", GridFunction(1, 4, (Eigen::VectorXd(4) << 0, 2, 1, 3).finished()));
  const auto v = run({"classical", line, "--notion", "vitali"}).report();
  CHECK(v.at("notion") == "jordan");
  CHECK(v.at("value") == 5.0);
  CHECK(run({"classical", path, "--notion", "jordan"}).code == kExitUsage);
}

TEST_CASE("osc, approx, atom and generate") {
  const auto sq5 = write_grid("sq5", sample_grid(1, 5, [](const auto& x) { return x[0] * x[0]; }));
  CHECK(run({"osc", sq5, "--k", "2"}).report().at("value").get<double>() == doctest::Approx(0.5));
  const auto sq3 = write_grid("sq3", sample_grid(1, 3, [](const auto& x) { return x[0] * x[0]; }));
  CHECK(run({"approx", sq3, "--k", "2"}).report().at("value") == 0.125);
  const auto path = write_grid("xy3", xy(3));
  CHECK(run({"osc", path, "--alpha", "1,1"}).report().at("value").get<double>() == doctest::Approx(1.0));
  CHECK(run({"osc", path, "--origin", "1,1", "--side", "1"}).report().at("cube").at("side") == 1);
  CHECK(run({"osc", path, "--origin", "2,2", "--side", "1"}).code == kExitUsage);

  const auto atom = (fs::temp_directory_path() / "latvar_cli_atom.json").string();
  std::ofstream(atom) << R"({"cube": {"origin": [0], "side": 2}, "weights": [{"point": [0], "weight": 0.25},
                          {"point": [1], "weight": -0.5}, {"point": [2], "weight": 0.25}]})";
  const auto va = run({"atom", "--atom", atom, "--k", "2", "--grid-n", "3"});
  CHECK(va.report().at("valid") == true);
  const auto dxy = write_grid("dxy", GridFunction(1, 7, (Eigen::VectorXd(7) << 0, 1, 0, 0, 0, -1, 0).finished()));
  const auto b = run({"atom", dxy}).report();
  CHECK(b.at("lower").get<double>() >= 1.0 - 1e-12);
  CHECK(b.at("upper").get<double>() <= 2.0 + 1e-12);

  const auto g = run({"generate", "lacunary", "--d", "2", "--n", "5", "--seed", "3"});
  CHECK(g.code == 0);
  CHECK(grid_from_json(g.report()).size() == 25);
  CHECK(run({"var", "--family", "uniform", "--d", "2", "--n", "5"}).code == 0);
}

TEST_CASE("exit codes and --out") {
  CHECK(run({}).code == kExitUsage);
  CHECK(run({"var", "--bogus"}).code == kExitUsage);
  CHECK(run({"var"}).code == kExitUsage);
  CHECK(run({"var", "/nonexistent/grid.json"}).code == kExitUsage);
  CHECK(run({"generate", "nope"}).code == kExitUsage);
  CHECK(run({"--help"}).code == kExitOk);
  const auto big = run({"var", "--family", "uniform", "--d", "2", "--n", "9"});
  CHECK(big.code == kExitGuard);
  CHECK(big.err.find("--method dyadic") != std::string::npos);
  CHECK(run({"var", "--family", "uniform", "--d", "2", "--n", "9", "--method", "dyadic"}).code == kExitOk);
  CHECK(run({"var", "--family", "uniform", "--mesh-cap", "0.5", "--volume-cap", "0.5"}).code == kExitUsage);

  const auto out = (fs::temp_directory_path() / "latvar_cli_out.json").string();
  fs::remove(out);
  const auto r = run({"--pretty", "--out", out, "generate", "uniform"});
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream in(out);
  CHECK(json::parse(in).at("n") == 5);

  const auto cfg = (fs::temp_directory_path() / "latvar_cli_cfg.json").string();
  std::ofstream(cfg) << R"({"seeds": 1, "invariants": ["core.cubes_unique"]})";
  CHECK(run({"suite", "--config", cfg}).code == kExitOk);
  CHECK(run({"suite", "--invariant", "no.such"}).code == kExitUsage);
  CHECK(run({"suite", "--list"}).report().at("invariants").size() > 30);
}
