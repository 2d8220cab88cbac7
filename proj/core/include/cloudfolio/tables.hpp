#pragma once

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

#include "cloudfolio/optimizer.hpp"
#include "cloudfolio/plan.hpp"

namespace cloudfolio {

// Delimited text table written row by row. Fields must not contain the
// delimiter or a newline (kInvalidArgument otherwise).
class TableWriter {
 public:
  TableWriter(const std::filesystem::path& path, char delimiter, std::vector<std::string> header);

  void row(const std::vector<std::string>& fields);
  std::size_t rows() const { return rows_; }
  void close();

 private:
  void write(const std::vector<std::string>& fields);

  std::filesystem::path path_;
  std::ofstream out_;
  char delimiter_;
  std::size_t columns_;
  std::size_t rows_ = 0;
};

// One row per interval: prefix..., vm_id, instance_type, marketspace, start,
// end, entry, migration_entry, cost_usd.
void write_plan_rows(TableWriter& table, const std::vector<std::string>& prefix, const Plan& plan);

// Long format prefix..., hour, marketspace, count. By default only hours where
// a marketspace's count changes are written (hour 1 lists every nonzero count).
void write_timeline_rows(TableWriter& table, const std::vector<std::string>& prefix, const Timeline& timeline,
                         bool every_hour = false);

}  // namespace cloudfolio
