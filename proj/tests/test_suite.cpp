#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "latvar/families.hpp"
#include "latvar/suite.hpp"

using namespace latvar;

TEST_CASE("registry is complete") {
  CHECK(registry_mismatches().empty());
  std::set<std::string> modules;
  for (const auto& def : invariant_registry()) {
    modules.insert(def.module);
    CHECK_FALSE(def.families.empty());
    for (const auto& f : def.families) CHECK(is_family(f));
  }
  for (const char* m : {"differences", "local_approx", "variation", "predual_atoms"}) CHECK(modules.count(m) == 1);
}

TEST_CASE("families are deterministic and validated") {
  for (const auto& name : family_names()) {
    FamilyParams fp;
    fp.d = name == "monotone-walk" ? 1 : 2;
    fp.n = 5;
    CHECK(generate(name, fp, 7).values() == generate(name, fp, 7).values());
  }
  CHECK_THROWS_AS(generate("nope", FamilyParams{}, 0), InvalidArgument);
  CHECK_THROWS_AS(generate("monotone-walk", FamilyParams{2, 5}, 0), InvalidArgument);
  const auto w = generate("monotone-walk", FamilyParams{1, 9}, 3);
  for (int i = 1; i < 9; ++i) CHECK(w[static_cast<std::size_t>(i)] >= w[static_cast<std::size_t>(i - 1)]);
}

TEST_CASE("suite run is deterministic and passes") {
  SuiteConfig cfg;
  cfg.seeds = 4;
  const auto a = suite_report_to_json(run_suite(cfg), false).dump();
  const auto r = run_suite(cfg);
  CHECK(a == suite_report_to_json(r, false).dump());
  CHECK(r.all_passed());
  CHECK(r.invariants.size() == invariant_registry().size());
  const auto j = suite_report_to_json(r);
  CHECK(j.at("schema_version") == SuiteReport::kSchemaVersion);
  CHECK(j.contains("runtime_seconds"));
  CHECK(j.at("measured_constants").contains("approx.whitney_lower_constant"));
}

TEST_CASE("null-space invariant over 100 polynomial seeds") {
  SuiteConfig cfg;
  cfg.invariants = {"variation.null_space"};
  cfg.seeds = 100;
  const auto r = run_suite(cfg);
  REQUIRE(r.invariants.size() == 1);
  CHECK(r.invariants[0].passed == 100);
}

TEST_CASE("whitney ratio is exactly 2 for k = 1, d = 1") {
  SuiteConfig cfg;
  cfg.invariants = {"approx.whitney_lower_constant"};
  cfg.d_values = {1};
  cfg.k_values = {1};
  cfg.seeds = 20;
  const auto r = run_suite(cfg);
  REQUIRE(r.invariants[0].measured_max);
  CHECK(*r.invariants[0].measured_max == 2.0);
  CHECK(*r.invariants[0].measured_min == 2.0);
}

TEST_CASE("config parsing") {
  const auto c = suite_config_from_json(nlohmann::json::parse(R"({"seeds": 3, "d": [1], "invariants": ["core.cubes_unique"]})"));
  CHECK(c.seeds == 3);
  CHECK(c.d_values == std::vector<int>{1});
  CHECK(suite_config_from_json(suite_config_to_json(c)).invariants == c.invariants);
  CHECK_THROWS_AS(suite_config_from_json(nlohmann::json::parse(R"({"sedes": 3})")), InvalidArgument);
  CHECK_THROWS_AS(suite_config_from_json(nlohmann::json::parse(R"({"p": [0.5]})")), InvalidArgument);
  SuiteConfig bad;
  bad.invariants = {"no.such"};
  CHECK_THROWS_AS(run_suite(bad), InvalidArgument);
}
