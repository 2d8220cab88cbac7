#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cloudfolio/catalog.hpp"
#include "cloudfolio/trace.hpp"

namespace cloudfolio {

struct MappingResult {
  std::string vm_id;
  RequirementMode mode = RequirementMode::kRequested;
  std::string instance_type;
  Marketspace price_basis = Marketspace::kODM;
  // Cheapest hourly price (or term fee for a reservation basis) on price_basis.
  Money reference_price;
};

// Cheapest instance type whose total MHz and memory both cover the
// requirement, priced on `price_basis`. Types without a price there are not
// candidates. Equal prices resolve to smaller memory, then smaller cpu, then name.
// Throws kNoFeasibleType.
MappingResult match_instance(const VmRequirement& requirement, const Catalog& catalog,
                             Marketspace price_basis = Marketspace::kODM);

// Reference price of `type` on `basis`, or nullopt when unpriced.
std::optional<Money> reference_price(const InstanceType& type, Marketspace basis, const Catalog& catalog);

struct TypeCount {
  std::string instance_type;
  std::int64_t count = 0;
};

// Counts per instance type, sorted by name; zero counts are not stored.
struct TypeDistribution {
  std::vector<TypeCount> counts;
  std::int64_t total = 0;

  std::int64_t count_of(std::string_view type) const;
  void add(std::string_view type, std::int64_t n = 1);
};

struct VmRequirementPair {
  VmRequirement requested;
  VmRequirement max_utilization;
};

struct VmMapping {
  MappingResult requested;
  MappingResult max_utilization;
  bool downgraded = false;  // max-utilization mapping is strictly cheaper
};

struct DeltaRow {
  std::string instance_type;
  std::int64_t requested = 0;
  std::int64_t max_utilization = 0;
  std::int64_t delta = 0;  // |requested - max_utilization|
};

struct PortfolioMapping {
  Marketspace price_basis = Marketspace::kODM;
  std::vector<VmMapping> vms;
  TypeDistribution requested;
  TypeDistribution max_utilization;
  std::vector<DeltaRow> delta;  // union of used types, sorted by name
  std::size_t downgraded = 0;

  double downgrade_share() const {
    return vms.empty() ? 0.0 : static_cast<double>(downgraded) / static_cast<double>(vms.size());
  }
};

// Errors from match_instance are rethrown with the offending vm_id.
PortfolioMapping map_portfolio(std::span<const VmRequirementPair> requirements, const Catalog& catalog,
                               Marketspace price_basis = Marketspace::kODM);

struct GiniIndex {
  double raw = 0.0;
  double corrected = 0.0;  // raw * q / (q - 1), clamped to [0, 1]
};

// q = counts.size(); every entry is a class, zero counts included. Shares are
// ordered ascending before accumulation. Throws kEmptyDistribution when there
// are no classes or no observations, kSingleClass when q = 1.
GiniIndex gini(std::span<const std::int64_t> counts);

// Classes are the types with a nonzero count.
GiniIndex gini(const TypeDistribution& distribution);

}  // namespace cloudfolio
