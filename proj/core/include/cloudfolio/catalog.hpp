#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cloudfolio/marketspace.hpp"
#include "cloudfolio/money.hpp"

namespace cloudfolio {

// Published spot reclaim-frequency ranges: <5%, 5-10%, 10-15%, 15-20%, >20%.
enum class InterruptionBucket : std::uint8_t { kLt5, kB5To10, kB10To15, kB15To20, kGt20 };

inline constexpr std::size_t kBucketCount = 5;

std::string_view to_string(InterruptionBucket bucket);
// Accepts LT5/B5_10/B10_15/B15_20/GT20 and the published "<5%", "5-10%", ... labels.
std::optional<InterruptionBucket> parse_bucket(std::string_view text);

struct InstanceType {
  std::string name;
  int vcpu = 0;
  double clock_mhz_per_vcpu = 0.0;
  double memory_gib = 0.0;
  InterruptionBucket interruption_bucket = InterruptionBucket::kLt5;

  double total_cpu_mhz() const { return vcpu * clock_mhz_per_vcpu; }
};

enum class PriceUnit : std::uint8_t { kPerHour, kPerTerm };

struct PriceEntry {
  std::string instance_type;
  Marketspace marketspace = Marketspace::kODM;
  std::string variant = "default";
  Money amount;
  PriceUnit unit = PriceUnit::kPerHour;
};

struct CostModel {
  Money penalty;  // cost of one spot interruption
  // Monthly interruption arrival rate per bucket; defaults are the upper bound
  // of each published range (25% for ">20%").
  std::array<double, kBucketCount> bucket_rate = {0.05, 0.10, 0.15, 0.20, 0.25};
  int hours_per_month = 720;

  double monthly_rate(InterruptionBucket b) const { return bucket_rate[static_cast<std::size_t>(b)]; }
  double hourly_rate(InterruptionBucket b) const { return monthly_rate(b) / hours_per_month; }

  // Throws kInvalidArgument when a rate is outside [0, 1], the penalty is
  // negative or hours_per_month is not positive.
  void validate() const;
};

// Immutable set of instance types and price entries. Construction validates
// every invariant (unique names, positive resources, no dangling price
// references, unique (type, marketspace, variant), unit matches marketspace).
class Catalog {
 public:
  Catalog() = default;
  Catalog(std::vector<InstanceType> types, std::vector<PriceEntry> prices, CostModel defaults = {});

  std::span<const InstanceType> instance_types() const { return types_; }
  std::span<const PriceEntry> prices() const { return prices_; }
  const CostModel& cost_model() const { return defaults_; }
  bool empty() const { return types_.empty(); }

  const InstanceType* find(std::string_view name) const;
  // Throws kDanglingReference for unknown names.
  const InstanceType& at(std::string_view name) const;

  std::vector<const PriceEntry*> prices_for(std::string_view type, Marketspace m) const;

  // Distinct variant labels used on a marketspace, sorted.
  std::vector<std::string> variants(Marketspace m) const;

 private:
  std::vector<InstanceType> types_;
  std::vector<PriceEntry> prices_;
  CostModel defaults_;
  std::map<std::string, std::size_t, std::less<>> type_index_;
  std::vector<std::array<std::vector<std::size_t>, kMarketspaceCount>> price_index_;
};

// Sectioned record format; see data/sample_catalog.txt for the layout.
Catalog load_catalog(const std::filesystem::path& path);
Catalog parse_catalog(std::string_view text, std::string_view source_name = "<memory>");

// Expected interruption cost per hour: hourly arrival rate times penalty (USD/h).
double penalty_per_hour(const InstanceType& instance, const CostModel& model);

// Only reservation marketspaces carry payment variants; when set, restricts
// term_fee and effective_hourly_cost lookups to that label.
struct VariantFilter {
  std::optional<std::string> reservation_variant;
};

// Cheapest hourly price over variants, plus the penalty (rounded to the
// micro-dollar) on the interruptible marketspace. Throws kNoPrice /
// kInvalidArgument for per-term marketspaces.
Money effective_hourly_cost(const InstanceType& instance, Marketspace marketspace, const CostModel& model,
                            const Catalog& catalog, const VariantFilter& filter = {});

// Cheapest term fee over payment variants. Throws kNoPrice.
Money term_fee(const InstanceType& instance, Marketspace marketspace, const Catalog& catalog,
               const VariantFilter& filter = {});

}  // namespace cloudfolio
