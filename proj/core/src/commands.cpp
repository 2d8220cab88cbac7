#include "cloudfolio/commands.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <json.hpp>
#include <thread>

#include "cloudfolio/error.hpp"
#include "cloudfolio/tables.hpp"

namespace cloudfolio {

namespace {

using Json = nlohmann::ordered_json;

std::string lower(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

void require_common(const RunConfig& config) {
  if (config.penalties.empty()) throw Error(ErrorCode::kInvalidArgument, "at least one penalty is required");
  for (const auto p : config.penalties) {
    if (p < Money{}) throw Error(ErrorCode::kInvalidArgument, "penalties must be non-negative");
  }
  if (config.planning_periods.empty()) throw Error(ErrorCode::kInvalidArgument, "at least one planning period is required");
  for (const auto n : config.planning_periods) {
    if (n < 1) throw Error(ErrorCode::kInvalidArgument, "planning periods must be positive");
  }
  if (config.workers == 0) throw Error(ErrorCode::kInvalidArgument, "workers must be at least 1");
  if (config.delimiter == '\n' || config.delimiter == '.' || config.delimiter == '\0') {
    throw Error(ErrorCode::kInvalidArgument, "unusable delimiter");
  }
}

void require_traces(const RunConfig& config) {
  if (config.trace_dir.empty() || !std::filesystem::is_directory(config.trace_dir)) {
    throw Error(ErrorCode::kMissingFile, "trace directory '" + config.trace_dir.string() + "' does not exist");
  }
}

void require_catalog(const RunConfig& config) {
  if (config.catalog_path.empty() || !std::filesystem::is_regular_file(config.catalog_path)) {
    throw Error(ErrorCode::kMissingFile, "catalog '" + config.catalog_path.string() + "' does not exist");
  }
}

void prepare_output(const RunConfig& config) {
  std::error_code ec;
  std::filesystem::create_directories(config.output_dir, ec);
  if (ec || !std::filesystem::is_directory(config.output_dir)) {
    throw Error(ErrorCode::kMissingFile, "cannot create output directory '" + config.output_dir.string() + "'");
  }
}

void write_json(const std::filesystem::path& path, const Json& doc) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << doc.dump(2) << '\n';
  if (!out) throw Error(ErrorCode::kMissingFile, "failed writing '" + path.string() + "'");
}

Json summary_header(std::string_view command) {
  Json doc;
  doc["schema_version"] = kSummarySchemaVersion;
  doc["command"] = command;
  return doc;
}

std::vector<RequirementMode> selected_modes(ModeSelection selection) {
  switch (selection) {
    case ModeSelection::kRequested: return {RequirementMode::kRequested};
    case ModeSelection::kMaxUtilization: return {RequirementMode::kMaxUtilization};
    case ModeSelection::kBoth: break;
  }
  return {RequirementMode::kRequested, RequirementMode::kMaxUtilization};
}

std::vector<Regime> selected_regimes(RegimeSelection selection) {
  switch (selection) {
    case RegimeSelection::kHomogeneous: return {Regime::kHomogeneous};
    case RegimeSelection::kNoMigration: return {Regime::kNoMigration};
    case RegimeSelection::kWithMigration: return {Regime::kWithMigration};
    case RegimeSelection::kAll: break;
  }
  return {kAllRegimes.begin(), kAllRegimes.end()};
}

Json gini_json(const TypeDistribution& dist) {
  Json g;
  g["classes"] = dist.counts.size();
  try {
    const auto index = gini(dist);
    g["raw"] = index.raw;
    g["corrected"] = index.corrected;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kSingleClass && e.code() != ErrorCode::kEmptyDistribution) throw;
    g["raw"] = nullptr;
    g["corrected"] = nullptr;
    g["note"] = std::string(to_string(e.code()));
  }
  return g;
}

const MappingResult& pick(const VmMapping& vm, RequirementMode mode) {
  return mode == RequirementMode::kRequested ? vm.requested : vm.max_utilization;
}

MapOutcome map_and_write(const RunConfig& config, const Catalog& catalog) {
  MapOutcome outcome;
  outcome.portfolio = load_portfolio(config);
  outcome.mapping = map_portfolio(outcome.portfolio.requirements, catalog, config.price_basis);

  const char d = config.delimiter;
  const auto modes = selected_modes(config.mode);
  TableWriter requirements(config.output_dir / "requirements.csv", d,
                           {"vm_id", "mode", "cpu_mhz", "memory_gib", "rows", "repaired_rows"});
  TableWriter mapping(config.output_dir / "mapping.csv", d,
                      {"vm_id", "mode", "instance_type", "price_basis", "price"});
  for (std::size_t i = 0; i < outcome.portfolio.requirements.size(); ++i) {
    const auto& pair = outcome.portfolio.requirements[i];
    const auto& stats = outcome.portfolio.stats[i];
    for (const auto mode : modes) {
      const VmRequirement& req = mode == RequirementMode::kRequested ? pair.requested : pair.max_utilization;
      requirements.row({req.vm_id, std::string(to_string(mode)), format_fixed(req.cpu_mhz), format_fixed(req.memory_gib),
                        std::to_string(stats.rows), std::to_string(stats.repaired_rows)});
      const MappingResult& m = pick(outcome.mapping.vms[i], mode);
      mapping.row({m.vm_id, std::string(to_string(mode)), m.instance_type, std::string(symbol(m.price_basis)),
                   format_usd(m.reference_price)});
    }
  }
  requirements.close();
  mapping.close();

  TableWriter distribution(config.output_dir / "distribution.csv", d,
                           {"instance_type", "requested_count", "maxutil_count", "delta"});
  for (const auto& row : outcome.mapping.delta) {
    distribution.row({row.instance_type, std::to_string(row.requested), std::to_string(row.max_utilization),
                      std::to_string(row.delta)});
  }
  distribution.close();

  std::size_t malformed = 0;
  std::size_t repaired = 0;
  for (const auto& s : outcome.portfolio.stats) {
    malformed += s.malformed_rows;
    repaired += s.repaired_rows;
  }
  Json doc = summary_header("map");
  doc["vm_count"] = outcome.mapping.vms.size();
  doc["price_basis"] = symbol(config.price_basis);
  doc["malformed_rows"] = malformed;
  doc["repaired_rows"] = repaired;
  doc["downgraded_vms"] = outcome.mapping.downgraded;
  doc["downgrade_share"] = outcome.mapping.downgrade_share();
  doc["gini"]["requested"] = gini_json(outcome.mapping.requested);
  doc["gini"]["max_utilization"] = gini_json(outcome.mapping.max_utilization);
  write_json(config.output_dir / "map_summary.json", doc);
  return outcome;
}

CostModel model_with_penalty(const Catalog& catalog, Money penalty) {
  CostModel model = catalog.cost_model();
  model.penalty = penalty;
  model.validate();
  return model;
}

VariantFilter variant_filter(const RunConfig& config) { return VariantFilter{config.reservation_variant}; }

}  // namespace

std::optional<ModeSelection> parse_mode_selection(std::string_view text) {
  const auto t = lower(text);
  if (t == "requested") return ModeSelection::kRequested;
  if (t == "max" || t == "max-utilization" || t == "max_utilization") return ModeSelection::kMaxUtilization;
  if (t == "both") return ModeSelection::kBoth;
  return std::nullopt;
}

std::optional<RegimeSelection> parse_regime_selection(std::string_view text) {
  const auto t = lower(text);
  if (t == "homogeneous") return RegimeSelection::kHomogeneous;
  if (t == "no-migration" || t == "no_migration") return RegimeSelection::kNoMigration;
  if (t == "with-migration" || t == "with_migration") return RegimeSelection::kWithMigration;
  if (t == "all") return RegimeSelection::kAll;
  return std::nullopt;
}

std::vector<Hours> default_planning_periods() {
  return {1, 2, 3, 4, 5, 6, 7, 10, 24, 720, 4320, 5760, 8760, 8761, 13152, 17520, 20400, 21912, 26280};
}

std::vector<Money> default_penalties() {
  return {Money::from_micros(0), Money::from_micros(100'000'000), Money::from_micros(500'000'000),
          Money::from_micros(1'000'000'000)};
}

LoadedPortfolio load_portfolio(const RunConfig& config) {
  require_traces(config);
  const auto files = discover_traces(config.trace_dir);
  if (files.empty()) {
    throw Error(ErrorCode::kEmptyTrace, "no *.csv trace files in '" + config.trace_dir.string() + "'");
  }
  TraceParseOptions options;
  options.delimiter = config.delimiter;
  options.strict = config.strict;

  LoadedPortfolio out;
  out.requirements.resize(files.size());
  out.stats.resize(files.size());
  std::vector<std::exception_ptr> errors(files.size());
  auto load_one = [&](std::size_t i) {
    try {
      const auto parsed = parse_trace_file(files[i], options);
      const auto id = vm_id_from_path(files[i]);
      out.requirements[i] = {summarize(parsed.rows, RequirementMode::kRequested, id),
                             summarize(parsed.rows, RequirementMode::kMaxUtilization, id)};
      out.stats[i] = {id, files[i], parsed.rows.size(), parsed.repaired_rows, parsed.malformed_rows};
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };
  const unsigned workers = std::max(1u, std::min<unsigned>(config.workers, static_cast<unsigned>(files.size())));
  if (workers == 1) {
    for (std::size_t i = 0; i < files.size(); ++i) load_one(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < files.size(); i = next++) load_one(i);
      });
    }
    for (auto& t : pool) t.join();
  }
  // Report the first failing file in directory order regardless of scheduling.
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

MapOutcome run_map(const RunConfig& config) {
  require_common(config);
  require_traces(config);
  require_catalog(config);
  prepare_output(config);
  const Catalog catalog = load_catalog(config.catalog_path);
  return map_and_write(config, catalog);
}

OptimizeOutcome run_optimize(const RunConfig& config) {
  require_common(config);
  require_traces(config);
  require_catalog(config);
  prepare_output(config);
  const Catalog catalog = load_catalog(config.catalog_path);

  OptimizeOutcome outcome;
  outcome.map = map_and_write(config, catalog);
  const auto regimes = selected_regimes(config.regime);
  const char d = config.delimiter;

  TableWriter matrix(config.output_dir / "avg_cost.csv", d,
                     {"mode", "penalty_usd", "n", "homogeneous", "no_migration", "with_migration", "homogeneous_winner"});
  TableWriter totals(config.output_dir / "totals.csv", d,
                     {"mode", "penalty_usd", "n", "regime", "total_usd", "avg_usd_per_vm_hour", "vm_count"});
  TableWriter timeline(config.output_dir / "timeline.csv", d,
                       {"mode", "penalty_usd", "n", "regime", "hour", "marketspace", "count"});
  std::optional<TableWriter> plans;
  if (config.write_plans) {
    plans.emplace(config.output_dir / "plans.csv", d,
                  std::vector<std::string>{"mode", "penalty_usd", "n", "regime", "vm_id", "instance_type",
                                           "marketspace", "start", "end", "entry", "migration_entry", "cost_usd"});
  }

  Json runs = Json::array();
  for (const auto mode : selected_modes(config.mode)) {
    std::vector<PortfolioVm> vms;
    vms.reserve(outcome.map.mapping.vms.size());
    for (const auto& vm : outcome.map.mapping.vms) {
      const auto& m = pick(vm, mode);
      vms.push_back({m.vm_id, &catalog.at(m.instance_type)});
    }
    for (const auto penalty : config.penalties) {
      const CostModel model = model_with_penalty(catalog, penalty);
      for (const auto n : config.planning_periods) {
        OptimizeRow row{mode, penalty, n, {}, std::nullopt};
        const std::vector<std::string> key = {std::string(to_string(mode)), format_usd(penalty), std::to_string(n)};
        for (const auto regime : regimes) {
          PortfolioOptions options;
          options.regime = regime;
          options.variants = variant_filter(config);
          options.workers = config.workers;
          options.keep_plans = config.write_plans;
          if (config.raw_greedy) options.greedy = GreedyOptions{false, false};
          const PortfolioReport report = plan_portfolio(n, vms, catalog, model, options);
          row.totals[static_cast<std::size_t>(regime)] = report.total;
          if (regime == Regime::kHomogeneous) row.homogeneous_winner = report.homogeneous_winner;

          auto prefix = key;
          prefix.emplace_back(to_string(regime));
          totals.row({prefix[0], prefix[1], prefix[2], prefix[3], format_usd(report.total),
                      format_fixed(report.avg_per_vm_hour), std::to_string(report.vm_count)});
          write_timeline_rows(timeline, prefix, report.timeline, config.full_timeline);
          if (plans) {
            for (const auto& plan : report.plans) write_plan_rows(*plans, prefix, plan);
          }
        }

        const auto& t = row.totals;
        const auto hom = t[static_cast<std::size_t>(Regime::kHomogeneous)];
        const auto no = t[static_cast<std::size_t>(Regime::kNoMigration)];
        const auto with = t[static_cast<std::size_t>(Regime::kWithMigration)];
        if ((with && no && *with > *no) || (no && hom && *no > *hom) || (with && hom && *with > *hom)) {
          throw Error(ErrorCode::kInvariantViolation, "regime ordering violated for mode " +
                                                          std::string(to_string(mode)) + ", penalty " +
                                                          format_usd(penalty) + ", n " + std::to_string(n));
        }
        const Hours vm_hours = n * static_cast<Hours>(vms.size());
        auto cell = [&](const std::optional<Money>& total) {
          return total && vm_hours > 0 ? format_fixed(usd_per_hour(*total, vm_hours)) : std::string("NA");
        };
        matrix.row({key[0], key[1], key[2], cell(hom), cell(no), cell(with),
                    row.homogeneous_winner ? std::string(symbol(*row.homogeneous_winner)) : std::string("NA")});

        Json run;
        run["mode"] = to_string(mode);
        run["penalty_usd"] = format_usd(penalty);
        run["n"] = n;
        for (const auto regime : regimes) {
          run["total_usd"][std::string(to_string(regime))] = format_usd(*t[static_cast<std::size_t>(regime)]);
        }
        if (row.homogeneous_winner) run["homogeneous_winner"] = symbol(*row.homogeneous_winner);
        runs.push_back(std::move(run));
        outcome.rows.push_back(std::move(row));
      }
    }
  }
  matrix.close();
  totals.close();
  timeline.close();
  if (plans) plans->close();

  Json doc = summary_header("optimize");
  doc["vm_count"] = outcome.map.mapping.vms.size();
  doc["greedy"] = config.raw_greedy ? "raw" : "lookahead+fallback";
  doc["runs"] = std::move(runs);
  write_json(config.output_dir / "optimize_summary.json", doc);
  return outcome;
}

ValidateOutcome run_validate(const RunConfig& config) {
  require_common(config);
  prepare_output(config);
  GreedyOptions greedy;
  if (config.raw_greedy) greedy = GreedyOptions{false, false};

  // User cases: every catalog type x penalty x planning period.
  std::vector<ValidationCase> user_cases;
  if (!config.catalog_path.empty()) {
    require_catalog(config);
    for (const auto n : config.planning_periods) {
      if (n > config.oracle_cap) {
        throw Error(ErrorCode::kHorizonTooLarge, std::to_string(n) + " hours exceeds the oracle cap of " +
                                                     std::to_string(config.oracle_cap));
      }
    }
    const Catalog catalog = load_catalog(config.catalog_path);
    for (const auto& type : catalog.instance_types()) {
      for (const auto penalty : config.penalties) {
        const PriceSheet sheet =
            make_price_sheet(type, catalog, model_with_penalty(catalog, penalty), variant_filter(config));
        if (!sheet.has(Marketspace::kSM) && !sheet.has(Marketspace::kODM)) continue;
        for (const auto n : config.planning_periods) {
          user_cases.push_back({"u-" + type.name + "-p" + format_usd(penalty) + "-n" + std::to_string(n), n, sheet, 0});
        }
      }
    }
  }

  ValidateOutcome outcome;
  if (config.structured_suite) {
    outcome.structured = validate_greedy(structured_suite(), greedy, config.oracle_cap);
  }
  outcome.random = validate_greedy(random_suite(config.random_cases, config.seed), greedy, config.oracle_cap);
  outcome.user = validate_greedy(user_cases, greedy, config.oracle_cap);

  TableWriter table(config.output_dir / "mismatches.csv", config.delimiter,
                    {"case_id", "n", "greedy_cost", "dp_cost", "gap", "seed"});
  Json doc = summary_header("validate");
  doc["greedy"] = config.raw_greedy ? "raw" : "lookahead+fallback";
  doc["seed"] = config.seed;
  std::vector<std::string> violations;
  for (const auto& [name, report] : {std::pair<std::string, const MismatchReport*>{"structured", &outcome.structured},
                                     {"random", &outcome.random},
                                     {"user", &outcome.user}}) {
    for (const auto& m : report->mismatches) {
      table.row({m.case_id, std::to_string(m.n), format_usd(m.greedy_cost), format_usd(m.dp_cost),
                 format_fixed(m.gap, 12), std::to_string(m.seed)});
    }
    doc["suites"][name] = {{"cases", report->cases}, {"mismatches", report->mismatches.size()}};
    violations.insert(violations.end(), report->violations.begin(), report->violations.end());
  }
  table.close();
  doc["violations"] = violations;
  write_json(config.output_dir / "validate_summary.json", doc);
  if (!violations.empty()) {
    throw Error(ErrorCode::kInvariantViolation, std::to_string(violations.size()) + " validation invariant(s) broken: " +
                                                    violations.front());
  }
  return outcome;
}

std::vector<ReportRow> run_report(const RunConfig& config) {
  require_common(config);
  require_traces(config);
  require_catalog(config);
  prepare_output(config);
  const Catalog catalog = load_catalog(config.catalog_path);
  const LoadedPortfolio portfolio = load_portfolio(config);
  const PortfolioMapping mapping = map_portfolio(portfolio.requirements, catalog, config.price_basis);

  std::vector<ReportRow> rows;
  for (const auto penalty : config.penalties) {
    const CostModel model = model_with_penalty(catalog, penalty);
    for (const Marketspace m : kAllMarketspaces) {
      std::vector<std::string> variants = {"default"};
      if (is_per_term(m)) variants = catalog.variants(m);
      for (const auto& variant : variants) {
        ReportRow row{penalty, m, variant, std::nullopt, std::nullopt};
        for (const auto mode : {RequirementMode::kRequested, RequirementMode::kMaxUtilization}) {
          std::optional<Money> sum = Money{};
          for (const auto& vm : mapping.vms) {
            const InstanceType& type = catalog.at(pick(vm, mode).instance_type);
            try {
              *sum += is_per_term(m) ? term_fee(type, m, catalog, VariantFilter{variant})
                                     : effective_hourly_cost(type, m, model, catalog);
            } catch (const Error& e) {
              if (e.code() != ErrorCode::kNoPrice) throw;
              sum.reset();
              break;
            }
          }
          if (!sum) continue;
          // Reservation fees are spread over their full term.
          const double per_hour = is_per_term(m) ? usd_per_hour(*sum, default_contract_period(m)) : sum->usd();
          (mode == RequirementMode::kRequested ? row.requested_usd_per_hour : row.max_utilization_usd_per_hour) =
              per_hour;
        }
        rows.push_back(std::move(row));
      }
    }
  }

  TableWriter table(config.output_dir / "homogeneous_report.csv", config.delimiter,
                    {"penalty_usd", "penalty_applied", "marketspace", "variant", "requested_usd_per_hour",
                     "maxutil_usd_per_hour", "delta_usd_per_hour"});
  auto cell = [](const std::optional<double>& v) { return v ? format_fixed(*v) : std::string("NA"); };
  for (const auto& r : rows) {
    std::optional<double> delta;
    if (r.requested_usd_per_hour && r.max_utilization_usd_per_hour) {
      delta = *r.requested_usd_per_hour - *r.max_utilization_usd_per_hour;
    }
    const bool applied = info(r.marketspace).interruptible && r.penalty > Money{};
    table.row({format_usd(r.penalty), applied ? "1" : "0", std::string(symbol(r.marketspace)), r.variant,
               cell(r.requested_usd_per_hour), cell(r.max_utilization_usd_per_hour), cell(delta)});
  }
  table.close();
  Json doc = summary_header("report");
  doc["vm_count"] = mapping.vms.size();
  doc["rows"] = rows.size();
  write_json(config.output_dir / "report_summary.json", doc);
  return rows;
}

}  // namespace cloudfolio
