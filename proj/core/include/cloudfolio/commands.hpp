#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "cloudfolio/catalog.hpp"
#include "cloudfolio/mapping.hpp"
#include "cloudfolio/optimizer.hpp"
#include "cloudfolio/oracle.hpp"
#include "cloudfolio/trace.hpp"

namespace cloudfolio {

inline constexpr int kSummarySchemaVersion = 1;

enum class ModeSelection : std::uint8_t { kRequested, kMaxUtilization, kBoth };
enum class RegimeSelection : std::uint8_t { kHomogeneous, kNoMigration, kWithMigration, kAll };

std::optional<ModeSelection> parse_mode_selection(std::string_view text);
std::optional<RegimeSelection> parse_regime_selection(std::string_view text);

std::vector<Hours> default_planning_periods();
std::vector<Money> default_penalties();

struct RunConfig {
  std::filesystem::path trace_dir;
  std::filesystem::path catalog_path;
  ModeSelection mode = ModeSelection::kBoth;
  RegimeSelection regime = RegimeSelection::kAll;
  std::vector<Money> penalties = default_penalties();
  std::vector<Hours> planning_periods = default_planning_periods();
  std::filesystem::path output_dir = "out";
  char delimiter = ';';  // trace input and every table written
  Marketspace price_basis = Marketspace::kODM;
  unsigned workers = 1;
  std::uint64_t seed = 42;

  bool strict = false;
  std::optional<std::string> reservation_variant;
  bool write_plans = false;
  bool full_timeline = false;
  bool raw_greedy = false;  // disable lookahead and single-marketspace fallback
  std::size_t random_cases = 1000;
  bool structured_suite = true;
  Hours oracle_cap = kDefaultOracleCap;
};

struct TraceStats {
  std::string vm_id;
  std::filesystem::path file;
  std::size_t rows = 0;
  std::size_t repaired_rows = 0;
  std::size_t malformed_rows = 0;
};

struct LoadedPortfolio {
  std::vector<VmRequirementPair> requirements;
  std::vector<TraceStats> stats;
};

// Parses every *.csv in config.trace_dir (in parallel when workers > 1).
// Errors carry the offending file name.
LoadedPortfolio load_portfolio(const RunConfig& config);

struct MapOutcome {
  LoadedPortfolio portfolio;
  PortfolioMapping mapping;
};

struct OptimizeRow {
  RequirementMode mode;
  Money penalty;
  Hours n = 0;
  std::array<std::optional<Money>, 3> totals{};  // indexed by Regime
  std::optional<Marketspace> homogeneous_winner;
};

struct OptimizeOutcome {
  MapOutcome map;
  std::vector<OptimizeRow> rows;
};

struct ValidateOutcome {
  MismatchReport structured;
  MismatchReport random;
  MismatchReport user;
};

struct ReportRow {
  Money penalty;
  Marketspace marketspace;
  std::string variant;
  std::optional<double> requested_usd_per_hour;
  std::optional<double> max_utilization_usd_per_hour;
};

// Each command validates the config, writes its artifacts into
// config.output_dir and returns what it wrote.
MapOutcome run_map(const RunConfig& config);
OptimizeOutcome run_optimize(const RunConfig& config);
ValidateOutcome run_validate(const RunConfig& config);
std::vector<ReportRow> run_report(const RunConfig& config);

}  // namespace cloudfolio
