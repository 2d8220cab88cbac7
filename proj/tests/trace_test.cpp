#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>

#include "cloudfolio/error.hpp"
#include "cloudfolio/money.hpp"
#include "cloudfolio/trace.hpp"

namespace cloudfolio {
namespace {

const std::filesystem::path kData = CLOUDFOLIO_TEST_DATA_DIR;

ErrorCode code_of(std::string_view text, TraceParseOptions options = {}) {
  try {
    parse_trace(text, options);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kInvariantViolation;
}

TEST(Trace, ParsesBitbrainsHead) {
  const auto parsed = parse_trace_file(kData / "bitbrains_head.csv");
  ASSERT_EQ(parsed.rows.size(), 2u);
  EXPECT_TRUE(parsed.had_header);
  EXPECT_EQ(parsed.malformed_rows, 0u);
  EXPECT_EQ(parsed.rows[0].timestamp, 1376314846);
  EXPECT_EQ(parsed.rows[0].cpu_cores, 4);
  EXPECT_EQ(format_fixed(parsed.rows[0].cpu_usage_mhz, 2), "10912.03");
  EXPECT_EQ(format_fixed(parsed.rows[1].cpu_usage_mhz, 2), "10890.57");
  EXPECT_EQ(parsed.rows[1].memory_usage_kb, 6755624.0);
}

TEST(Trace, SummariesOfBitbrainsHead) {
  const auto parsed = parse_trace_file(kData / "bitbrains_head.csv");
  const auto requested = summarize(parsed.rows, RequirementMode::kRequested, "1");
  EXPECT_EQ(requested.cpu_mhz, 11704.0);
  EXPECT_EQ(requested.memory_gib, 64.0);
  const auto peak = summarize(parsed.rows, RequirementMode::kMaxUtilization, "1");
  EXPECT_EQ(format_fixed(peak.cpu_mhz), "10912.030000");
  EXPECT_EQ(peak.memory_gib, 6755624.0 / (1024.0 * 1024.0));
  EXPECT_EQ(format_fixed(peak.memory_gib, 4), "6.4427");
}

TEST(Trace, AllZeroRow) {
  const auto parsed = parse_trace("1;1;0;0;0;0;0\n");
  const auto peak = summarize(parsed.rows, RequirementMode::kMaxUtilization);
  EXPECT_EQ(peak.cpu_mhz, 0.0);
  EXPECT_EQ(peak.memory_gib, 0.0);
}

TEST(Trace, HeaderOnlyIsEmpty) {
  EXPECT_EQ(code_of("Timestamp;CPU cores;a;b;c;d;e\n"), ErrorCode::kEmptyTrace);
  EXPECT_EQ(code_of(""), ErrorCode::kEmptyTrace);
  EXPECT_THROW(summarize({}, RequirementMode::kRequested), Error);
}

TEST(Trace, NegativeAndExcessUsageIsRepaired) {
  const auto parsed = parse_trace("1;2;100;50;50;1000;-3\n2;2;100;150;150;1000;10\n3;2;100;10;10;1000;10\n");
  ASSERT_EQ(parsed.rows.size(), 3u);
  EXPECT_EQ(parsed.repaired_rows, 2u);
  EXPECT_EQ(parsed.rows[0].memory_usage_kb, 0.0);
  EXPECT_EQ(parsed.rows[1].cpu_usage_mhz, 100.0);
}

TEST(Trace, MalformedRowsAreCountedOrFatal) {
  const std::string text = "1;2;100;50;50;1000;10\n2;2;oops;50;50;1000;10\n3;2;100\n4;2;100;50;50;1000;10\n";
  const auto parsed = parse_trace(text);
  EXPECT_EQ(parsed.rows.size(), 2u);
  EXPECT_EQ(parsed.malformed_rows, 2u);
  TraceParseOptions strict;
  strict.strict = true;
  EXPECT_EQ(code_of(text, strict), ErrorCode::kMalformedRow);
}

TEST(Trace, DuplicateTimestamps) {
  const std::string text = "5;2;100;50;50;1000;10\n1;2;100;20;20;1000;10\n5;2;100;70;70;1000;10\n";
  const auto parsed = parse_trace(text);
  ASSERT_EQ(parsed.rows.size(), 2u);
  EXPECT_EQ(parsed.rows[0].timestamp, 1);
  EXPECT_EQ(parsed.rows[1].cpu_usage_mhz, 70.0);
  EXPECT_EQ(parsed.duplicate_rows, 1u);
  TraceParseOptions reject;
  reject.duplicates = DuplicatePolicy::kReject;
  EXPECT_EQ(code_of(text, reject), ErrorCode::kMalformedRow);
}

TEST(Trace, CustomDelimiter) {
  TraceParseOptions options;
  options.delimiter = ',';
  const auto parsed = parse_trace("ts,cores,a,b,c,d,e\n1,2,100,50,50,1000,10\n", options);
  EXPECT_EQ(parsed.rows.size(), 1u);
}

TEST(Trace, MissingFile) {
  try {
    parse_trace_file(kData / "nope.csv");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMissingFile);
  }
}

TEST(Trace, DiscoversNumericallyOrdered) {
  const auto dir = std::filesystem::temp_directory_path() / "cloudfolio_discover";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  for (const char* name : {"10.csv", "2.csv", "1.csv", "b.csv", "notes.txt"}) std::ofstream(dir / name) << "x\n";
  std::vector<std::string> names;
  for (const auto& p : discover_traces(dir)) names.push_back(p.filename().string());
  EXPECT_EQ(names, (std::vector<std::string>{"1.csv", "2.csv", "10.csv", "b.csv"}));
  EXPECT_EQ(vm_id_from_path(dir / "10.csv"), "10");
  std::filesystem::remove_all(dir);
  EXPECT_THROW(discover_traces(dir), Error);
}

TEST(Trace, MaxModeDominatedAndOrderFree) {
  std::mt19937_64 rng(5);
  auto real = [&](double hi) { return static_cast<double>(rng() % 1'000'000) / 1'000'000.0 * hi; };
  for (int trial = 0; trial < 50; ++trial) {
    std::string text;
    for (int r = 0; r < 30; ++r) {
      const double cap = real(20000) - 1000;
      const double mem = real(1e8) - 1e6;
      text += std::to_string(r) + ";4;" + std::to_string(cap) + ";" + std::to_string(real(25000) - 2000) + ";1;" +
              std::to_string(mem) + ";" + std::to_string(real(1.2e8) - 1e6) + "\n";
    }
    auto parsed = parse_trace(text);
    const auto req = summarize(parsed.rows, RequirementMode::kRequested);
    const auto peak = summarize(parsed.rows, RequirementMode::kMaxUtilization);
    EXPECT_LE(peak.cpu_mhz, req.cpu_mhz);
    EXPECT_LE(peak.memory_gib, req.memory_gib);
    std::shuffle(parsed.rows.begin(), parsed.rows.end(), rng);
    EXPECT_EQ(summarize(parsed.rows, RequirementMode::kMaxUtilization).cpu_mhz, peak.cpu_mhz);
  }
}

}  // namespace
}  // namespace cloudfolio
