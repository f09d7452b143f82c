#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "latvar/grid.hpp"

namespace latvar {

struct SuiteConfig {
  std::vector<std::string> invariants;  ///< empty: every registered invariant
  int seeds = 10;
  std::uint64_t seed_start = 0;
  std::vector<int> d_values{1, 2};
  std::vector<int> n_values{3, 4, 5};
  std::vector<int> k_values{1, 2};
  std::vector<double> p_values{1.0, 2.0};
  /// Draw seed_start from the system entropy source.
  bool fuzz = false;
  /// When set, failing cells are appended here as JSON lines.
  std::string archive_path;
};

SuiteConfig suite_config_from_json(const nlohmann::json& j);
nlohmann::json suite_config_to_json(const SuiteConfig& c);

/// Grid shape and parameters for one (invariant, family, seed) cell.
struct CellContext {
  std::string family;
  std::uint64_t seed = 0;
  int d = 1;
  int n = 5;
  int k = 1;
  double p = 1.0;
};

enum class CellStatus { pass, fail, skip };

struct CellOutcome {
  CellStatus status = CellStatus::pass;
  /// Margin by which the property held (negative on failure).
  double slack = 0.0;
  std::optional<double> measured;
  std::string detail;
  /// Reproduction data recorded on failure.
  nlohmann::json repro;
};

struct InvariantDef {
  std::string name;
  std::string module;
  std::string description;
  std::vector<std::string> families;
  std::string measured_label;  ///< empty when the invariant measures nothing
  std::function<CellOutcome(const CellContext&)> run;
};

/// Every invariant the library defines.
const std::vector<std::string>& declared_invariants();
const std::vector<InvariantDef>& invariant_registry();
/// Declared names with no registry entry, plus registry entries that are not
/// declared. Empty when the registry is complete.
std::vector<std::string> registry_mismatches();

struct CellRecord {
  std::string invariant;
  CellContext context;
  CellOutcome outcome;
};

struct InvariantSummary {
  std::string name;
  std::string module;
  int passed = 0;
  int failed = 0;
  int skipped = 0;
  std::optional<double> worst_slack;
  std::string measured_label;
  std::optional<double> measured_min;
  std::optional<double> measured_max;
};

struct SuiteReport {
  static constexpr int kSchemaVersion = 1;
  SuiteConfig config;
  std::vector<InvariantSummary> invariants;
  std::vector<CellRecord> cells;
  double runtime_seconds = 0.0;

  int failures() const;
  bool all_passed() const { return failures() == 0; }
};

/// Runs each selected invariant over its families and the seed range.
/// Unknown invariant names throw InvalidArgument.
SuiteReport run_suite(const SuiteConfig& config);

/// Cells are ordered by (invariant, family, seed). Timing appears only in
/// "runtime_seconds", omitted when include_timing is false.
nlohmann::json suite_report_to_json(const SuiteReport& r, bool include_timing = true);

}  // namespace latvar
