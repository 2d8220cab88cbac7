#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <optional>
#include <string_view>

namespace cloudfolio {

using Hours = std::int64_t;

inline constexpr Hours kUnboundedPeriod = std::numeric_limits<Hours>::max();
inline constexpr Hours kHoursPerYear = 365 * 24;

// Declaration order is the tie-break order used by every planner.
enum class Marketspace : std::uint8_t {
  kSM,    // spot, interruptible
  kH1SM,  // 1-hour spot block
  kH6SM,  // 6-hour spot block
  kODM,   // on-demand
  kYR1M,  // 1-year reservation
  kYR3M,  // 3-year reservation
};

inline constexpr std::size_t kMarketspaceCount = 6;

inline constexpr std::array<Marketspace, kMarketspaceCount> kAllMarketspaces = {
    Marketspace::kSM,   Marketspace::kH1SM, Marketspace::kH6SM,
    Marketspace::kODM,  Marketspace::kYR1M, Marketspace::kYR3M,
};

enum class PricingMode : std::uint8_t { kPerHour, kPerTermFee };

struct MarketspaceInfo {
  Marketspace id;
  Hours contract_period_hours;  // kUnboundedPeriod for SM and ODM
  PricingMode pricing_mode;
  bool interruptible;
};

constexpr std::size_t index_of(Marketspace m) { return static_cast<std::size_t>(m); }

constexpr MarketspaceInfo info(Marketspace m) {
  switch (m) {
    case Marketspace::kSM: return {m, kUnboundedPeriod, PricingMode::kPerHour, true};
    case Marketspace::kH1SM: return {m, 1, PricingMode::kPerHour, false};
    case Marketspace::kH6SM: return {m, 6, PricingMode::kPerHour, false};
    case Marketspace::kODM: return {m, kUnboundedPeriod, PricingMode::kPerHour, false};
    case Marketspace::kYR1M: return {m, kHoursPerYear, PricingMode::kPerTermFee, false};
    case Marketspace::kYR3M: return {m, 3 * kHoursPerYear, PricingMode::kPerTermFee, false};
  }
  return {m, kUnboundedPeriod, PricingMode::kPerHour, false};
}

constexpr Hours default_contract_period(Marketspace m) { return info(m).contract_period_hours; }
constexpr bool is_per_term(Marketspace m) { return info(m).pricing_mode == PricingMode::kPerTermFee; }
constexpr bool is_unbounded(Marketspace m) { return info(m).contract_period_hours == kUnboundedPeriod; }

// File/report symbol: SM, ODM, 1HSM, 6HSM, 1YRM, 3YRM.
std::string_view symbol(Marketspace m);

// Accepts the file symbols above as well as the enum-style spellings
// (H1SM, H6SM, YR1M, YR3M), case-insensitively.
std::optional<Marketspace> parse_marketspace(std::string_view text);

}  // namespace cloudfolio
