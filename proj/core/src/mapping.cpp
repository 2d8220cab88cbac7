#include "cloudfolio/mapping.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>

#include "cloudfolio/error.hpp"

namespace cloudfolio {

std::optional<Money> reference_price(const InstanceType& type, Marketspace basis, const Catalog& catalog) {
  std::optional<Money> best;
  for (const PriceEntry* entry : catalog.prices_for(type.name, basis)) {
    if (!best || entry->amount < *best) best = entry->amount;
  }
  return best;
}

MappingResult match_instance(const VmRequirement& requirement, const Catalog& catalog, Marketspace price_basis) {
  const InstanceType* chosen = nullptr;
  Money chosen_price;
  for (const InstanceType& type : catalog.instance_types()) {
    if (type.total_cpu_mhz() < requirement.cpu_mhz || type.memory_gib < requirement.memory_gib) continue;
    const auto price = reference_price(type, price_basis, catalog);
    if (!price) continue;
    bool better = chosen == nullptr;
    if (!better) {
      if (*price != chosen_price) {
        better = *price < chosen_price;
      } else if (type.memory_gib != chosen->memory_gib) {
        better = type.memory_gib < chosen->memory_gib;
      } else if (type.total_cpu_mhz() != chosen->total_cpu_mhz()) {
        better = type.total_cpu_mhz() < chosen->total_cpu_mhz();
      } else {
        better = type.name < chosen->name;
      }
    }
    if (better) {
      chosen = &type;
      chosen_price = *price;
    }
  }
  if (chosen == nullptr) {
    throw Error(ErrorCode::kNoFeasibleType, "no instance type covers " + format_fixed(requirement.cpu_mhz, 2) +
                                                " MHz / " + format_fixed(requirement.memory_gib, 3) + " GiB" +
                                                (requirement.vm_id.empty() ? "" : " for VM '" + requirement.vm_id + "'"));
  }
  return MappingResult{requirement.vm_id, requirement.mode, chosen->name, price_basis, chosen_price};
}

std::int64_t TypeDistribution::count_of(std::string_view type) const {
  auto it = std::lower_bound(counts.begin(), counts.end(), type,
                             [](const TypeCount& c, std::string_view t) { return c.instance_type < t; });
  return it != counts.end() && it->instance_type == type ? it->count : 0;
}

void TypeDistribution::add(std::string_view type, std::int64_t n) {
  if (n == 0) return;
  auto it = std::lower_bound(counts.begin(), counts.end(), type,
                             [](const TypeCount& c, std::string_view t) { return c.instance_type < t; });
  if (it == counts.end() || it->instance_type != type) it = counts.insert(it, TypeCount{std::string(type), 0});
  it->count += n;
  total += n;
}

PortfolioMapping map_portfolio(std::span<const VmRequirementPair> requirements, const Catalog& catalog,
                               Marketspace price_basis) {
  PortfolioMapping out;
  out.price_basis = price_basis;
  out.vms.reserve(requirements.size());
  for (const auto& pair : requirements) {
    VmMapping vm;
    try {
      vm.requested = match_instance(pair.requested, catalog, price_basis);
      vm.max_utilization = match_instance(pair.max_utilization, catalog, price_basis);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kNoFeasibleType) throw;
      throw Error(e.code(), "VM '" + pair.requested.vm_id + "': " + e.what());
    }
    vm.downgraded = vm.max_utilization.reference_price < vm.requested.reference_price;
    if (vm.downgraded) ++out.downgraded;
    out.requested.add(vm.requested.instance_type);
    out.max_utilization.add(vm.max_utilization.instance_type);
    out.vms.push_back(std::move(vm));
  }
  std::map<std::string, DeltaRow> rows;
  for (const auto& c : out.requested.counts) rows[c.instance_type].requested = c.count;
  for (const auto& c : out.max_utilization.counts) rows[c.instance_type].max_utilization = c.count;
  for (auto& [name, row] : rows) {
    row.instance_type = name;
    row.delta = std::llabs(row.requested - row.max_utilization);
    out.delta.push_back(row);
  }
  return out;
}

GiniIndex gini(std::span<const std::int64_t> counts) {
  if (counts.empty()) throw Error(ErrorCode::kEmptyDistribution, "no classes");
  std::int64_t total = 0;
  for (auto c : counts) {
    if (c < 0) throw Error(ErrorCode::kInvalidArgument, "negative class count");
    total += c;
  }
  if (total == 0) throw Error(ErrorCode::kEmptyDistribution, "no observations");
  const std::size_t q = counts.size();
  if (q == 1) throw Error(ErrorCode::kSingleClass, "Gini correction undefined for a single class");

  std::vector<std::int64_t> sorted(counts.begin(), counts.end());
  std::sort(sorted.begin(), sorted.end());
  const double qd = static_cast<double>(q);
  const double td = static_cast<double>(total);
  double sum = 0.0;
  for (std::size_t i = 1; i <= q; ++i) {
    const double k_prev = static_cast<double>(i - 1) / qd;
    const double k_i = static_cast<double>(i) / qd;
    sum += (k_prev + k_i) * (static_cast<double>(sorted[i - 1]) / td);
  }
  GiniIndex g;
  g.raw = std::clamp(sum - 1.0, 0.0, 1.0);
  g.corrected = std::clamp(g.raw * qd / (qd - 1.0), 0.0, 1.0);
  return g;
}

GiniIndex gini(const TypeDistribution& distribution) {
  std::vector<std::int64_t> counts;
  for (const auto& c : distribution.counts) {
    if (c.count > 0) counts.push_back(c.count);
  }
  return gini(counts);
}

}  // namespace cloudfolio
