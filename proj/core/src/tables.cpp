#include "cloudfolio/tables.hpp"

#include "cloudfolio/error.hpp"

namespace cloudfolio {

TableWriter::TableWriter(const std::filesystem::path& path, char delimiter, std::vector<std::string> header)
    : path_(path), out_(path, std::ios::binary | std::ios::trunc), delimiter_(delimiter), columns_(header.size()) {
  if (!out_) throw Error(ErrorCode::kMissingFile, "cannot write '" + path.string() + "'");
  write(header);
}

void TableWriter::row(const std::vector<std::string>& fields) {
  if (fields.size() != columns_) {
    throw Error(ErrorCode::kInvalidArgument, path_.string() + ": row has " + std::to_string(fields.size()) +
                                                 " fields, expected " + std::to_string(columns_));
  }
  write(fields);
  ++rows_;
}

void TableWriter::write(const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (fields[i].find_first_of(std::string{delimiter_, '\n'}) != std::string::npos) {
      throw Error(ErrorCode::kInvalidArgument, path_.string() + ": field '" + fields[i] + "' contains the delimiter");
    }
    if (i > 0) out_ << delimiter_;
    out_ << fields[i];
  }
  out_ << '\n';
}

void TableWriter::close() {
  out_.close();
  if (!out_) throw Error(ErrorCode::kMissingFile, "failed writing '" + path_.string() + "'");
}

void write_plan_rows(TableWriter& table, const std::vector<std::string>& prefix, const Plan& plan) {
  for (const auto& iv : plan.intervals) {
    auto fields = prefix;
    fields.insert(fields.end(), {plan.vm_id, plan.instance_type, std::string(symbol(iv.marketspace)),
                                 std::to_string(iv.start), std::to_string(iv.end), std::string(to_string(iv.entry)),
                                 iv.entered_by_migration() ? "1" : "0", format_usd(iv.cost)});
    table.row(fields);
  }
}

void write_timeline_rows(TableWriter& table, const std::vector<std::string>& prefix, const Timeline& timeline,
                         bool every_hour) {
  for (Hours h = 1; h <= timeline.horizon(); ++h) {
    for (const Marketspace m : kAllMarketspaces) {
      const auto count = timeline.count(h, m);
      const bool changed = h == 1 ? count != 0 : count != timeline.count(h - 1, m);
      if (every_hour ? count != 0 : changed) {
        auto fields = prefix;
        fields.insert(fields.end(), {std::to_string(h), std::string(symbol(m)), std::to_string(count)});
        table.row(fields);
      }
    }
  }
}

}  // namespace cloudfolio
