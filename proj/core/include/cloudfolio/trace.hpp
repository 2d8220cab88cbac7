#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cloudfolio {

inline constexpr double kKibPerGib = 1024.0 * 1024.0;

// One sample of a per-VM utilization trace (Bitbrains GWA-T-12 column order).
// Disk and network throughput columns are read past and discarded.
struct TraceRow {
  std::int64_t timestamp = 0;
  int cpu_cores = 0;
  double cpu_capacity_mhz = 0.0;
  double cpu_usage_mhz = 0.0;
  double cpu_usage_pct = 0.0;
  double memory_capacity_kb = 0.0;
  double memory_usage_kb = 0.0;
};

enum class DuplicatePolicy { kLastWins, kReject };

struct TraceParseOptions {
  char delimiter = ';';
  bool strict = false;  // malformed rows raise kMalformedRow instead of being counted
  DuplicatePolicy duplicates = DuplicatePolicy::kLastWins;
};

struct ParsedTrace {
  std::vector<TraceRow> rows;  // sorted by timestamp, unique timestamps
  std::size_t malformed_rows = 0;
  std::size_t repaired_rows = 0;   // negative values or usage above capacity, clamped
  std::size_t duplicate_rows = 0;  // superseded under kLastWins
  bool had_header = false;
};

ParsedTrace parse_trace(std::string_view text, const TraceParseOptions& options = {},
                        std::string_view source_name = "<memory>");
ParsedTrace parse_trace_file(const std::filesystem::path& path, const TraceParseOptions& options = {});

enum class RequirementMode { kRequested, kMaxUtilization };

std::string_view to_string(RequirementMode mode);

struct VmRequirement {
  std::string vm_id;
  double cpu_mhz = 0.0;
  double memory_gib = 0.0;
  RequirementMode mode = RequirementMode::kRequested;
};

// Requested mode: peak provisioned capacity. Max-utilization mode: peak usage.
// Memory is converted from KiB to GiB. Throws kEmptyTrace on no rows.
VmRequirement summarize(std::span<const TraceRow> rows, RequirementMode mode, std::string vm_id = {});

// All *.csv files directly inside `dir`, numeric stems ordered by value and
// before any non-numeric stems. Throws kMissingFile when `dir` is not a directory.
std::vector<std::filesystem::path> discover_traces(const std::filesystem::path& dir);

std::string vm_id_from_path(const std::filesystem::path& path);

}  // namespace cloudfolio
