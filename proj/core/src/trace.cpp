#include "cloudfolio/trace.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "cloudfolio/error.hpp"
#include "text_util.hpp"

namespace cloudfolio {

namespace {

constexpr std::size_t kRequiredColumns = 7;

bool looks_numeric(std::string_view token) {
  return detail::parse_double(token).has_value();
}

// Returns false when the row cannot be used.
bool parse_row(const std::vector<std::string_view>& fields, TraceRow& row) {
  if (fields.size() < kRequiredColumns) return false;
  const auto ts = detail::parse_int(fields[0]);
  std::optional<std::int64_t> ts_fallback;
  if (!ts) {
    // Some exports write epoch seconds with a fractional part.
    const auto d = detail::parse_double(fields[0]);
    if (!d || !std::isfinite(*d)) return false;
    ts_fallback = static_cast<std::int64_t>(std::floor(*d));
  }
  const auto cores = detail::parse_int(fields[1]);
  if (!cores) return false;
  double values[5];
  for (std::size_t i = 0; i < 5; ++i) {
    const auto v = detail::parse_double(fields[i + 2]);
    if (!v || !std::isfinite(*v)) return false;
    values[i] = *v;
  }
  row.timestamp = ts ? *ts : *ts_fallback;
  row.cpu_cores = static_cast<int>(*cores);
  row.cpu_capacity_mhz = values[0];
  row.cpu_usage_mhz = values[1];
  row.cpu_usage_pct = values[2];
  row.memory_capacity_kb = values[3];
  row.memory_usage_kb = values[4];
  return true;
}

// Clamps negatives to zero and usage to capacity. Returns true if anything changed.
bool repair(TraceRow& row) {
  bool changed = false;
  auto clamp_low = [&](double& v) {
    if (v < 0.0) {
      v = 0.0;
      changed = true;
    }
  };
  clamp_low(row.cpu_capacity_mhz);
  clamp_low(row.cpu_usage_mhz);
  clamp_low(row.cpu_usage_pct);
  clamp_low(row.memory_capacity_kb);
  clamp_low(row.memory_usage_kb);
  if (row.cpu_cores < 0) {
    row.cpu_cores = 0;
    changed = true;
  }
  if (row.cpu_usage_mhz > row.cpu_capacity_mhz) {
    row.cpu_usage_mhz = row.cpu_capacity_mhz;
    changed = true;
  }
  if (row.memory_usage_kb > row.memory_capacity_kb) {
    row.memory_usage_kb = row.memory_capacity_kb;
    changed = true;
  }
  return changed;
}

}  // namespace

ParsedTrace parse_trace(std::string_view text, const TraceParseOptions& options, std::string_view source_name) {
  ParsedTrace out;
  std::map<std::int64_t, std::pair<TraceRow, bool>> by_timestamp;  // row, repaired
  detail::LineReader reader(text);
  std::string_view line;
  bool first_content = true;
  while (reader.next(line)) {
    if (detail::trim(line).empty()) continue;
    auto fields = detail::split(line, options.delimiter);
    if (first_content) {
      first_content = false;
      if (!looks_numeric(fields.front())) {
        out.had_header = true;
        continue;
      }
    }
    TraceRow row;
    if (!parse_row(fields, row)) {
      if (options.strict) {
        throw Error(ErrorCode::kMalformedRow,
                    std::string(source_name) + ":" + std::to_string(reader.line_number()) + ": malformed row");
      }
      ++out.malformed_rows;
      continue;
    }
    const bool repaired = repair(row);
    auto [it, inserted] = by_timestamp.try_emplace(row.timestamp, row, repaired);
    if (!inserted) {
      if (options.duplicates == DuplicatePolicy::kReject) {
        throw Error(ErrorCode::kMalformedRow, std::string(source_name) + ":" + std::to_string(reader.line_number()) +
                                                  ": duplicate timestamp " + std::to_string(row.timestamp));
      }
      it->second = {row, repaired};
      ++out.duplicate_rows;
    }
  }
  out.rows.reserve(by_timestamp.size());
  for (const auto& [ts, entry] : by_timestamp) {
    out.rows.push_back(entry.first);
    if (entry.second) ++out.repaired_rows;
  }
  if (out.rows.empty()) {
    throw Error(ErrorCode::kEmptyTrace, std::string(source_name) + ": no valid rows");
  }
  return out;
}

ParsedTrace parse_trace_file(const std::filesystem::path& path, const TraceParseOptions& options) {
  if (!std::filesystem::is_regular_file(path)) {
    throw Error(ErrorCode::kMissingFile, "trace '" + path.string() + "' does not exist");
  }
  return parse_trace(detail::read_file(path.string()), options, path.string());
}

std::string_view to_string(RequirementMode mode) {
  return mode == RequirementMode::kRequested ? "requested" : "max_utilization";
}

VmRequirement summarize(std::span<const TraceRow> rows, RequirementMode mode, std::string vm_id) {
  if (rows.empty()) throw Error(ErrorCode::kEmptyTrace, "cannot summarize an empty trace '" + vm_id + "'");
  VmRequirement req;
  req.vm_id = std::move(vm_id);
  req.mode = mode;
  double cpu = 0.0;
  double memory_kb = 0.0;
  for (const auto& row : rows) {
    if (mode == RequirementMode::kRequested) {
      cpu = std::max(cpu, row.cpu_capacity_mhz);
      memory_kb = std::max(memory_kb, row.memory_capacity_kb);
    } else {
      cpu = std::max(cpu, row.cpu_usage_mhz);
      memory_kb = std::max(memory_kb, row.memory_usage_kb);
    }
  }
  req.cpu_mhz = cpu;
  req.memory_gib = memory_kb / kKibPerGib;
  return req;
}

std::vector<std::filesystem::path> discover_traces(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw Error(ErrorCode::kMissingFile, "trace directory '" + dir.string() + "' does not exist");
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".csv") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end(), [](const auto& a, const auto& b) {
    const auto sa = a.stem().string();
    const auto sb = b.stem().string();
    const auto na = detail::parse_int(sa);
    const auto nb = detail::parse_int(sb);
    if (na && nb && *na != *nb) return *na < *nb;
    if (na.has_value() != nb.has_value()) return na.has_value();
    return sa < sb;
  });
  return files;
}

std::string vm_id_from_path(const std::filesystem::path& path) { return path.stem().string(); }

}  // namespace cloudfolio
