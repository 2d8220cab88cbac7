#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cloudfolio/catalog.hpp"
#include "cloudfolio/plan.hpp"

namespace cloudfolio {

// Average cost per slot of occupying marketspace `m` with base cost `c`
// (hourly cost, or term fee for reservations). `l` is the number of further
// slots held after the first, `k` is 1 when the interval ends in a migration.
// `period` overrides the contract period (used by H6SM's migration share).
// Throws kH1smBeyondOneHour (H1SM with k = 1) and kDivisionGuard.
double avg_cost(Marketspace m, double c, Hours l, int k, std::optional<Hours> period = std::nullopt);

struct GreedyOptions {
  // Compare every horizon-spanning H6SM chain against the single-interval
  // candidates over the same remaining length.
  bool same_length_lookahead = true;
  // Return the best single-marketspace plan when it is strictly cheaper.
  bool static_fallback = true;
};

Plan plan_vm_with_migration(Hours n, const PriceSheet& sheet, const GreedyOptions& options = {});
Plan plan_vm_with_migration(Hours n, const InstanceType& instance, const Catalog& catalog, const CostModel& model,
                            const GreedyOptions& options = {});

// Cost of hosting on `m` alone for n hours, or nullopt when infeasible:
// hourly marketspaces need n within the contract period, reservations are
// renewed back to back (ceil(n / T) fees).
std::optional<Money> single_marketspace_cost(Hours n, Marketspace m, const PriceSheet& sheet);
Plan single_marketspace_plan(Hours n, Marketspace m, const PriceSheet& sheet);

// Cheapest single-marketspace plan; ties resolve in marketspace order.
// Throws kInfeasible when nothing is priced.
Plan plan_vm_no_migration(Hours n, const PriceSheet& sheet);
Plan plan_vm_no_migration(Hours n, const InstanceType& instance, const Catalog& catalog, const CostModel& model);

enum class Regime : std::uint8_t { kHomogeneous, kNoMigration, kWithMigration };

inline constexpr std::array<Regime, 3> kAllRegimes = {Regime::kHomogeneous, Regime::kNoMigration,
                                                      Regime::kWithMigration};

std::string_view to_string(Regime regime);

// Hour-by-hour VM count per marketspace. A VM migrating at hour h is counted
// on both marketspaces (or twice on H6SM) at that hour.
class Timeline {
 public:
  Timeline() = default;
  explicit Timeline(Hours n);

  Hours horizon() const { return n_; }
  void add(const Plan& plan, std::int64_t multiplicity = 1);
  void merge(const Timeline& other);
  // Hours are 1-based.
  std::int64_t count(Hours hour, Marketspace m) const;
  std::int64_t total(Hours hour) const;

 private:
  void materialize() const;

  Hours n_ = 0;
  // Difference arrays until first read.
  mutable std::array<std::vector<std::int64_t>, kMarketspaceCount> counts_{};
  mutable bool prefix_done_ = true;
};

struct PortfolioVm {
  std::string vm_id;
  const InstanceType* instance = nullptr;
};

struct PortfolioReport {
  Regime regime = Regime::kWithMigration;
  Hours n = 0;
  std::size_t vm_count = 0;
  std::vector<Plan> plans;  // empty unless requested
  Timeline timeline;
  Money total;
  double avg_per_vm_hour = 0.0;
  // Homogeneous regime only: per-marketspace portfolio total (nullopt when
  // some VM cannot be hosted there) and the winner.
  std::array<std::optional<Money>, kMarketspaceCount> homogeneous_totals{};
  std::optional<Marketspace> homogeneous_winner;
};

// Throws kMixedHorizons when plans disagree on n. An empty input yields an
// empty report.
PortfolioReport aggregate(std::span<const Plan> plans, Regime regime = Regime::kWithMigration);

struct HomogeneousChoice {
  std::array<std::optional<Money>, kMarketspaceCount> totals{};
  std::optional<Marketspace> winner;
};

// Per-marketspace portfolio totals under the single-marketspace feasibility
// rules, applied to every VM. H6SM extensions are not allowed.
HomogeneousChoice choose_homogeneous(Hours n, std::span<const PriceSheet> sheets);

PortfolioReport plan_homogeneous(Hours n, std::span<const PortfolioVm> vms, const Catalog& catalog,
                                 const CostModel& model, const VariantFilter& filter = {});

struct PortfolioOptions {
  Regime regime = Regime::kWithMigration;
  GreedyOptions greedy;
  VariantFilter variants;
  bool keep_plans = false;
  unsigned workers = 1;
};

// Plans every VM under the chosen regime. VMs sharing an instance type share
// one plan computation.
PortfolioReport plan_portfolio(Hours n, std::span<const PortfolioVm> vms, const Catalog& catalog,
                               const CostModel& model, const PortfolioOptions& options = {});

}  // namespace cloudfolio
