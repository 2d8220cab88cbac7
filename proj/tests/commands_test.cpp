#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cloudfolio/commands.hpp"
#include "cloudfolio/error.hpp"

namespace cloudfolio {
namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class Commands : public ::testing::Test {
 protected:
  void SetUp() override {
    root_ = fs::temp_directory_path() /
            ("cloudfolio_cmd_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(root_);
    fs::create_directories(root_);
    config_.trace_dir = fs::path(CLOUDFOLIO_TEST_DATA_DIR) / "traces";
    config_.catalog_path = CLOUDFOLIO_SAMPLE_CATALOG;
    config_.output_dir = root_ / "out";
  }
  void TearDown() override { fs::remove_all(root_); }

  fs::path root_;
  RunConfig config_;
};

TEST_F(Commands, MapWritesTables) {
  const auto outcome = run_map(config_);
  ASSERT_EQ(outcome.mapping.vms.size(), 2u);
  EXPECT_EQ(outcome.mapping.vms[0].requested.instance_type, "r5.4xlarge");
  const std::string requirements = slurp(config_.output_dir / "requirements.csv");
  EXPECT_NE(requirements.find("1;requested;11704.000000;64.000000;2;0\n"), std::string::npos) << requirements;
  EXPECT_NE(requirements.find("1;max_utilization;10912.030000;6.442665;2;0\n"), std::string::npos) << requirements;
  EXPECT_NE(requirements.find("2;max_utilization;11.700000;0.002000;3;1\n"), std::string::npos) << requirements;
  const std::string mapping = slurp(config_.output_dir / "mapping.csv");
  EXPECT_EQ(mapping.substr(0, mapping.find('\n')), "vm_id;mode;instance_type;price_basis;price");
  EXPECT_NE(mapping.find("1;requested;r5.4xlarge;ODM;1.216000"), std::string::npos);
  EXPECT_TRUE(fs::exists(config_.output_dir / "distribution.csv"));
  EXPECT_NE(slurp(config_.output_dir / "map_summary.json").find("\"schema_version\": 1"), std::string::npos);
}

TEST_F(Commands, OptimizeIsDeterministic) {
  config_.planning_periods = {1, 10, 8761};
  config_.penalties = {Money{}, *Money::parse("1000")};
  config_.write_plans = true;
  const auto first = run_optimize(config_);
  EXPECT_EQ(first.rows.size(), 2u * 2u * 3u);
  std::map<std::string, std::string> files;
  for (const auto& entry : fs::directory_iterator(config_.output_dir)) files[entry.path().filename()] = slurp(entry);
  config_.workers = 3;
  run_optimize(config_);
  for (const auto& [name, content] : files) EXPECT_EQ(slurp(config_.output_dir / name), content) << name;
  const std::string matrix = files["avg_cost.csv"];
  EXPECT_EQ(matrix.substr(0, matrix.find('\n')),
            "mode;penalty_usd;n;homogeneous;no_migration;with_migration;homogeneous_winner");
  EXPECT_NE(matrix.find("requested;0.000000;10;"), std::string::npos);
  for (const auto& row : first.rows) {
    EXPECT_LE(*row.totals[2], *row.totals[1]);
    EXPECT_LE(*row.totals[1], *row.totals[0]);
    if (row.penalty == Money{}) EXPECT_EQ(row.homogeneous_winner, Marketspace::kSM);
  }
}

TEST_F(Commands, OptimizeSingleRegime) {
  config_.planning_periods = {1};
  config_.penalties = {Money{}};
  config_.regime = RegimeSelection::kHomogeneous;
  config_.mode = ModeSelection::kRequested;
  const auto outcome = run_optimize(config_);
  ASSERT_EQ(outcome.rows.size(), 1u);
  EXPECT_TRUE(outcome.rows[0].totals[0]);
  EXPECT_FALSE(outcome.rows[0].totals[2]);
  EXPECT_NE(slurp(config_.output_dir / "avg_cost.csv").find(";NA;NA;SM"), std::string::npos);
}

TEST_F(Commands, ValidateWritesReport) {
  config_.catalog_path.clear();
  config_.random_cases = 50;
  config_.structured_suite = false;
  const auto outcome = run_validate(config_);
  EXPECT_EQ(outcome.random.cases, 50u);
  const std::string report = slurp(config_.output_dir / "mismatches.csv");
  EXPECT_EQ(report.substr(0, report.find('\n')), "case_id;n;greedy_cost;dp_cost;gap;seed");
}

TEST_F(Commands, ValidateRejectsHorizonOverCap) {
  config_.planning_periods = {50000};
  config_.random_cases = 0;
  config_.structured_suite = false;
  try {
    run_validate(config_);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kHorizonTooLarge);
  }
}

TEST_F(Commands, MissingInputs) {
  config_.trace_dir = root_ / "missing";
  try {
    run_map(config_);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMissingFile);
  }
  config_.trace_dir = root_;
  try {
    run_map(config_);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyTrace);
  }
}

TEST_F(Commands, BadTraceIsNamed) {
  const fs::path dir = root_ / "traces";
  fs::create_directories(dir);
  std::ofstream(dir / "7.csv") << "Timestamp;cores\n";
  config_.trace_dir = dir;
  try {
    run_map(config_);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyTrace);
    EXPECT_NE(std::string(e.what()).find("7.csv"), std::string::npos);
  }
}

TEST_F(Commands, ReportListsVariants) {
  config_.penalties = {Money{}, *Money::parse("500")};
  const auto rows = run_report(config_);
  // 4 hourly marketspaces + 3 variants for each reservation, per penalty.
  EXPECT_EQ(rows.size(), 2u * (4u + 3u + 3u));
  for (const auto& r : rows) {
    ASSERT_TRUE(r.requested_usd_per_hour);
    ASSERT_TRUE(r.max_utilization_usd_per_hour);
    EXPECT_LE(*r.max_utilization_usd_per_hour, *r.requested_usd_per_hour);
  }
  EXPECT_TRUE(fs::exists(config_.output_dir / "homogeneous_report.csv"));
}

TEST(RunConfigParsing, Selections) {
  EXPECT_EQ(parse_mode_selection("max"), ModeSelection::kMaxUtilization);
  EXPECT_EQ(parse_regime_selection("With-Migration"), RegimeSelection::kWithMigration);
  EXPECT_FALSE(parse_regime_selection("sometimes"));
  EXPECT_EQ(default_planning_periods().size(), 19u);
}

}  // namespace
}  // namespace cloudfolio
