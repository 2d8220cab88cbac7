#pragma once

// Exhaustive enumeration of interval chains for tiny horizons. Shares no code
// with the planners beyond the price sheet and plan types.

#include <functional>
#include <optional>
#include <vector>

#include "cloudfolio/plan.hpp"

namespace cloudfolio::testing {

struct BruteForceResult {
  std::optional<Money> best;
  std::size_t chains = 0;
  std::vector<Plan> all;  // filled when requested
};

inline BruteForceResult brute_force(Hours n, const PriceSheet& sheet, bool keep_all = false) {
  BruteForceResult result;
  Plan current;
  current.n = n;

  auto cost_of = [&](Marketspace m, Hours start, Hours end) {
    const Hours d = end - start + 1;
    return is_per_term(m) ? *sheet.price[index_of(m)] : *sheet.price[index_of(m)] * d;
  };
  auto cap_end = [&](Marketspace m, Hours start) {
    const Hours t = sheet.period[index_of(m)];
    return t >= n ? n : std::min(n, start + t - 1);
  };

  std::function<void()> extend = [&]() {
    const Interval last = current.intervals.back();
    if (last.end == n) {
      ++result.chains;
      const Money total = current.total_cost();
      if (!result.best || total < *result.best) result.best = total;
      if (keep_all) result.all.push_back(current);
      return;
    }
    for (const Marketspace m : kAllMarketspaces) {
      if (!sheet.price[index_of(m)]) continue;
      // Migration: overlap on last.end, must advance.
      if (m != last.marketspace || m == Marketspace::kH6SM) {
        for (Hours b = last.end + 1; b <= cap_end(m, last.end); ++b) {
          current.intervals.push_back({last.end, b, m, EntryKind::kMigration, cost_of(m, last.end, b)});
          extend();
          current.intervals.pop_back();
        }
      }
      // Renewal: same reservation directly after a full term.
      if (m == last.marketspace && is_per_term(m) && last.decision_count() == sheet.period[index_of(m)]) {
        for (Hours b = last.end + 1; b <= cap_end(m, last.end + 1); ++b) {
          current.intervals.push_back({last.end + 1, b, m, EntryKind::kRenewal, cost_of(m, last.end + 1, b)});
          extend();
          current.intervals.pop_back();
        }
      }
    }
  };

  for (const Marketspace m : kAllMarketspaces) {
    if (!sheet.price[index_of(m)]) continue;
    for (Hours b = 1; b <= cap_end(m, 1); ++b) {
      current.intervals.push_back({1, b, m, EntryKind::kInitial, cost_of(m, 1, b)});
      extend();
      current.intervals.pop_back();
    }
  }
  return result;
}

}  // namespace cloudfolio::testing
