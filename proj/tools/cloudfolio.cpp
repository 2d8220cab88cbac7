// cloudfolio: trace mapping, portfolio planning and greedy-vs-oracle validation.
//
// Exit codes: 0 success, 1 input error, 2 internal invariant violation.

#include <CLI11.hpp>
#include <iostream>
#include <thread>

#include "cloudfolio/commands.hpp"
#include "cloudfolio/error.hpp"

namespace {

using namespace cloudfolio;

struct RawOptions {
  std::string traces;
  std::string catalog;
  std::string mode = "both";
  std::string regime = "all";
  std::vector<std::string> penalties;
  std::vector<Hours> periods;
  std::string out = "out";
  std::string delimiter = ";";
  std::string price_basis = "ODM";
  std::string variant;
  unsigned workers = std::max(1u, std::thread::hardware_concurrency());
  std::uint64_t seed = 42;
  bool strict = false;
  bool plans = false;
  bool full_timeline = false;
  bool raw_greedy = false;
  std::size_t random_cases = 1000;
  bool skip_structured = false;
  Hours oracle_cap = kDefaultOracleCap;
};

[[noreturn]] void input_error(const std::string& message) { throw Error(ErrorCode::kInvalidArgument, message); }

RunConfig to_config(const RawOptions& raw, bool validate_defaults) {
  RunConfig config;
  config.trace_dir = raw.traces;
  config.catalog_path = raw.catalog;
  config.output_dir = raw.out;

  const auto mode = parse_mode_selection(raw.mode);
  if (!mode) input_error("unknown --mode '" + raw.mode + "' (requested|max|both)");
  config.mode = *mode;
  const auto regime = parse_regime_selection(raw.regime);
  if (!regime) input_error("unknown --regime '" + raw.regime + "' (homogeneous|no-migration|with-migration|all)");
  config.regime = *regime;

  if (!raw.penalties.empty()) {
    config.penalties.clear();
    for (const auto& text : raw.penalties) {
      const auto value = Money::parse(text);
      if (!value || *value < Money{}) input_error("invalid --penalty '" + text + "'");
      config.penalties.push_back(*value);
    }
  }
  if (!raw.periods.empty()) {
    config.planning_periods = raw.periods;
  } else if (validate_defaults) {
    // Oracle-sized horizons; the year-scale grid is far above the cap.
    config.planning_periods = {1, 2, 6, 7, 10, 24, 168, 720, 2000};
  }

  if (raw.delimiter == "\\t" || raw.delimiter == "tab") {
    config.delimiter = '\t';
  } else if (raw.delimiter.size() == 1) {
    config.delimiter = raw.delimiter.front();
  } else {
    input_error("--delimiter must be a single character");
  }
  const auto basis = parse_marketspace(raw.price_basis);
  if (!basis) input_error("unknown --price-basis '" + raw.price_basis + "'");
  config.price_basis = *basis;
  if (!raw.variant.empty()) config.reservation_variant = raw.variant;
  config.workers = raw.workers;
  config.seed = raw.seed;
  config.strict = raw.strict;
  config.write_plans = raw.plans;
  config.full_timeline = raw.full_timeline;
  config.raw_greedy = raw.raw_greedy;
  config.random_cases = raw.random_cases;
  config.structured_suite = !raw.skip_structured;
  config.oracle_cap = raw.oracle_cap;
  return config;
}

void add_common(CLI::App* cmd, RawOptions& raw) {
  cmd->add_option("--out", raw.out, "Output directory")->capture_default_str();
  cmd->add_option("--delimiter", raw.delimiter, "Field delimiter for traces and tables (\\t for tab)")
      ->capture_default_str();
  cmd->add_option("--penalty", raw.penalties, "Spot interruption penalty in USD (repeatable)");
  cmd->add_option("--period", raw.periods, "Planning period in hours (repeatable)");
  cmd->add_option("--workers", raw.workers, "Worker threads")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", raw.seed, "Random seed")->capture_default_str();
  cmd->add_option("--variant", raw.variant, "Restrict reservation fees to one payment variant");
}

void add_inputs(CLI::App* cmd, RawOptions& raw, bool traces_required) {
  auto* traces = cmd->add_option("--traces", raw.traces, "Directory of per-VM trace files (*.csv)");
  if (traces_required) traces->required();
  cmd->add_option("--catalog", raw.catalog, "Catalog file")->required();
  cmd->add_option("--mode", raw.mode, "requested|max|both")->capture_default_str();
  cmd->add_option("--price-basis", raw.price_basis, "Marketspace used to rank instance types")->capture_default_str();
  cmd->add_flag("--strict", raw.strict, "Fail on malformed trace rows");
}

void print_map(const MapOutcome& outcome) {
  std::cout << "mapped " << outcome.mapping.vms.size() << " VMs; downgraded " << outcome.mapping.downgraded << " ("
            << format_fixed(100.0 * outcome.mapping.downgrade_share(), 1) << "%)\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cost-optimal cloud portfolios from VM traces and a marketspace catalog"};
  app.require_subcommand(1);
  RawOptions raw;

  auto* map_cmd = app.add_subcommand("map", "Map traces to the cheapest feasible instance types");
  add_inputs(map_cmd, raw, true);
  add_common(map_cmd, raw);

  auto* optimize_cmd = app.add_subcommand("optimize", "Plan portfolios for each penalty, period and regime");
  add_inputs(optimize_cmd, raw, true);
  add_common(optimize_cmd, raw);
  optimize_cmd->add_option("--regime", raw.regime, "homogeneous|no-migration|with-migration|all")
      ->capture_default_str();
  optimize_cmd->add_flag("--plans", raw.plans, "Write every interval of every plan");
  optimize_cmd->add_flag("--full-timeline", raw.full_timeline, "Write every hour instead of change points");
  optimize_cmd->add_flag("--raw-greedy", raw.raw_greedy, "Disable lookahead and single-marketspace fallback");

  auto* validate_cmd = app.add_subcommand("validate", "Compare the greedy planner against the exact oracle");
  add_common(validate_cmd, raw);
  validate_cmd->add_option("--catalog", raw.catalog, "Also validate every type of this catalog");
  validate_cmd->add_option("--random", raw.random_cases, "Number of random cases")->capture_default_str();
  validate_cmd->add_option("--oracle-cap", raw.oracle_cap, "Largest horizon the oracle accepts")
      ->capture_default_str();
  validate_cmd->add_flag("--skip-structured", raw.skip_structured, "Skip the bundled structured suite");
  validate_cmd->add_flag("--raw-greedy", raw.raw_greedy, "Disable lookahead and single-marketspace fallback");

  auto* report_cmd = app.add_subcommand("report", "Homogeneous per-hour portfolio costs per marketspace and variant");
  add_inputs(report_cmd, raw, true);
  add_common(report_cmd, raw);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (map_cmd->parsed()) {
      print_map(run_map(to_config(raw, false)));
    } else if (optimize_cmd->parsed()) {
      const auto outcome = run_optimize(to_config(raw, false));
      print_map(outcome.map);
      std::cout << "planned " << outcome.rows.size() << " (mode, penalty, period) combinations\n";
    } else if (validate_cmd->parsed()) {
      const auto outcome = run_validate(to_config(raw, true));
      for (const auto& [name, report] : {std::pair{"structured", &outcome.structured}, std::pair{"random", &outcome.random},
                                         std::pair{"user", &outcome.user}}) {
        std::cout << name << ": " << report->cases << " cases, " << report->mismatches.size() << " mismatches\n";
      }
    } else if (report_cmd->parsed()) {
      const auto rows = run_report(to_config(raw, false));
      std::cout << "wrote " << rows.size() << " report rows\n";
    }
  } catch (const Error& e) {
    std::cerr << "cloudfolio: " << e.what() << '\n';
    return e.code() == ErrorCode::kInvariantViolation ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "cloudfolio: internal error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
