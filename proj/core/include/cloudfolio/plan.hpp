#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cloudfolio/catalog.hpp"
#include "cloudfolio/marketspace.hpp"
#include "cloudfolio/money.hpp"

namespace cloudfolio {

// Per-instance price vector seen by the planners: effective hourly cost
// (penalty included) on per-hour marketspaces, term fee on reservations.
// Contract periods default to the marketspace table and may be scaled down
// for synthetic validation.
struct PriceSheet {
  std::array<std::optional<Money>, kMarketspaceCount> price{};
  std::array<Hours, kMarketspaceCount> period{};

  PriceSheet();

  bool has(Marketspace m) const { return price[index_of(m)].has_value(); }
  Money at(Marketspace m) const;
  Hours period_of(Marketspace m) const { return period[index_of(m)]; }

  // Per-hour: decisions x hourly. Per-term: one fee regardless of length.
  Money interval_cost(Marketspace m, Hours decisions) const;

  // Throws kInvalidArgument on a non-positive bounded period, an unbounded
  // reservation period, or a negative price.
  void validate() const;
};

PriceSheet make_price_sheet(const InstanceType& instance, const Catalog& catalog, const CostModel& model,
                            const VariantFilter& filter = {});

enum class EntryKind : std::uint8_t {
  kInitial,    // starts at hour 1
  kMigration,  // starts on the previous interval's last hour (double-hosted overlap)
  kRenewal,    // back-to-back repurchase of the same reservation after a full term
};

std::string_view to_string(EntryKind kind);

// Inclusive hour range [start, end] on one marketspace.
struct Interval {
  Hours start = 1;
  Hours end = 1;
  Marketspace marketspace = Marketspace::kODM;
  EntryKind entry = EntryKind::kInitial;
  Money cost;

  Hours decision_count() const { return end - start + 1; }
  bool entered_by_migration() const { return entry == EntryKind::kMigration; }
};

struct Plan {
  std::string vm_id;
  std::string instance_type;
  Hours n = 0;
  std::vector<Interval> intervals;

  Money total_cost() const;
  std::size_t migrations() const;
  Hours decision_total() const;
  double avg_cost_per_hour() const { return usd_per_hour(total_cost(), n); }
};

// Structural check: chaining, coverage of [1, n], contract caps, entry kinds,
// same-marketspace rules and, when `sheet` is given, interval costs. Returns
// a description of the first violation.
std::optional<std::string> check_plan(const Plan& plan, const PriceSheet* sheet = nullptr);

// Throws kInvariantViolation when check_plan reports a problem.
void require_valid_plan(const Plan& plan, const PriceSheet* sheet = nullptr);

// True when no interval can be lengthened on its own marketspace (within its
// contract period and the horizon) to a strictly lower cost per decision.
bool is_locally_optimal(const Plan& plan, const PriceSheet& sheet);

}  // namespace cloudfolio
