#include "cloudfolio/plan.hpp"

#include <algorithm>

#include "cloudfolio/error.hpp"
#include "text_util.hpp"

namespace cloudfolio {

PriceSheet::PriceSheet() {
  for (auto m : kAllMarketspaces) period[index_of(m)] = default_contract_period(m);
}

Money PriceSheet::at(Marketspace m) const {
  const auto& p = price[index_of(m)];
  if (!p) throw Error(ErrorCode::kNoPrice, "no price on " + std::string(symbol(m)));
  return *p;
}

Money PriceSheet::interval_cost(Marketspace m, Hours decisions) const {
  return is_per_term(m) ? at(m) : at(m) * decisions;
}

void PriceSheet::validate() const {
  for (auto m : kAllMarketspaces) {
    const Hours t = period_of(m);
    if (t <= 0) throw Error(ErrorCode::kInvalidArgument, std::string(symbol(m)) + ": contract period must be positive");
    if (is_per_term(m) && t == kUnboundedPeriod) {
      throw Error(ErrorCode::kInvalidArgument, std::string(symbol(m)) + ": reservation period must be bounded");
    }
    if (has(m) && at(m) < Money{}) {
      throw Error(ErrorCode::kInvalidArgument, std::string(symbol(m)) + ": negative price");
    }
  }
}

PriceSheet make_price_sheet(const InstanceType& instance, const Catalog& catalog, const CostModel& model,
                            const VariantFilter& filter) {
  PriceSheet sheet;
  for (auto m : kAllMarketspaces) {
    try {
      sheet.price[index_of(m)] = is_per_term(m) ? term_fee(instance, m, catalog, filter)
                                                : effective_hourly_cost(instance, m, model, catalog, filter);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kNoPrice) throw;
    }
  }
  return sheet;
}

std::string_view to_string(EntryKind kind) {
  switch (kind) {
    case EntryKind::kInitial: return "initial";
    case EntryKind::kMigration: return "migration";
    case EntryKind::kRenewal: return "renewal";
  }
  return "?";
}

Money Plan::total_cost() const {
  Money total;
  for (const auto& iv : intervals) total += iv.cost;
  return total;
}

std::size_t Plan::migrations() const {
  std::size_t count = 0;
  for (const auto& iv : intervals) count += iv.entered_by_migration() ? 1 : 0;
  return count;
}

Hours Plan::decision_total() const {
  Hours total = 0;
  for (const auto& iv : intervals) total += iv.decision_count();
  return total;
}

std::optional<std::string> check_plan(const Plan& plan, const PriceSheet* sheet) {
  auto where = [](std::size_t i) { return "interval " + std::to_string(i) + ": "; };
  if (plan.n < 1) return std::string("planning period must be positive");
  if (plan.intervals.empty()) return std::string("plan has no intervals");
  for (std::size_t i = 0; i < plan.intervals.size(); ++i) {
    const Interval& iv = plan.intervals[i];
    const Marketspace m = iv.marketspace;
    const Hours period = sheet ? sheet->period_of(m) : default_contract_period(m);
    if (iv.start < 1 || iv.end < iv.start) return where(i) + "empty or negative range";
    if (iv.decision_count() > period) return where(i) + "exceeds contract period of " + std::string(symbol(m));
    if (i == 0) {
      if (iv.entry != EntryKind::kInitial || iv.start != 1) return where(i) + "first interval must start at hour 1";
    } else {
      const Interval& prev = plan.intervals[i - 1];
      switch (iv.entry) {
        case EntryKind::kInitial:
          return where(i) + "only the first interval may be initial";
        case EntryKind::kMigration:
          if (iv.start != prev.end) return where(i) + "migration must overlap the previous last hour";
          if (iv.end <= prev.end) return where(i) + "migration does not advance coverage";
          if (m == prev.marketspace && m != Marketspace::kH6SM) {
            return where(i) + "same-marketspace migration is only allowed on " + std::string(symbol(Marketspace::kH6SM));
          }
          break;
        case EntryKind::kRenewal: {
          const Hours prev_period = sheet ? sheet->period_of(prev.marketspace) : default_contract_period(prev.marketspace);
          if (iv.start != prev.end + 1) return where(i) + "renewal must start right after the previous term";
          if (m != prev.marketspace || !is_per_term(m)) return where(i) + "renewal must repeat the same reservation";
          if (prev.decision_count() != prev_period) return where(i) + "renewal must follow a full term";
          break;
        }
      }
    }
    if (sheet) {
      if (!sheet->has(m)) return where(i) + "no price on " + std::string(symbol(m));
      if (iv.cost != sheet->interval_cost(m, iv.decision_count())) return where(i) + "cost does not match prices";
    }
  }
  if (plan.intervals.back().end != plan.n) return std::string("plan does not end at the planning horizon");
  return std::nullopt;
}

void require_valid_plan(const Plan& plan, const PriceSheet* sheet) {
  if (auto problem = check_plan(plan, sheet)) {
    throw Error(ErrorCode::kInvariantViolation, "plan for '" + plan.vm_id + "': " + *problem);
  }
}

bool is_locally_optimal(const Plan& plan, const PriceSheet& sheet) {
  for (const auto& iv : plan.intervals) {
    const Marketspace m = iv.marketspace;
    const Hours cap = std::min(plan.n, sheet.period_of(m) == kUnboundedPeriod ? plan.n : iv.start + sheet.period_of(m) - 1);
    const Hours longest = cap - iv.start + 1;
    if (longest <= iv.decision_count()) continue;
    // Cost per decision: fee / d for a reservation, constant for hourly billing.
    const detail::Int128 cost = sheet.interval_cost(m, iv.decision_count()).micros();
    const detail::Int128 extended = sheet.interval_cost(m, longest).micros();
    if (extended * iv.decision_count() < cost * longest) return false;
  }
  return true;
}

}  // namespace cloudfolio
