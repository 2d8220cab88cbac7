#include "cloudfolio/oracle.hpp"

#include <algorithm>
#include <deque>
#include <limits>

#include "cloudfolio/error.hpp"

namespace cloudfolio {

namespace {

constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;

struct Parent {
  EntryKind kind = EntryKind::kInitial;
  std::int32_t from_end = 0;
  std::uint8_t from_market = 0;
  std::uint8_t from_full_layer = 0;
};

// Layer 0: cheapest chain ending at b on m. Layer 1: same, restricted to a
// last interval that is a full reservation term (the only state a renewal may follow).
struct Table {
  std::size_t width;
  std::vector<std::int64_t> cost[2];
  std::vector<Parent> parent[2];

  explicit Table(Hours n) : width(static_cast<std::size_t>(n) + 1) {
    for (int layer = 0; layer < 2; ++layer) {
      cost[layer].assign(kMarketspaceCount * width, kInf);
      parent[layer].assign(kMarketspaceCount * width, Parent{});
    }
  }
  std::size_t at(std::size_t m, Hours b) const { return m * width + static_cast<std::size_t>(b); }
};

struct Source {
  std::int64_t cost = kInf;
  std::uint8_t market = 0;
};

bool may_follow(std::size_t from, std::size_t to) {
  return from != to || to == index_of(Marketspace::kH6SM);
}

// Cheapest chain ending at a whose last marketspace may migrate into `to`.
Source best_source(const Table& table, const PriceSheet& sheet, Hours a, std::size_t to) {
  Source s;
  for (std::size_t m = 0; m < kMarketspaceCount; ++m) {
    if (!sheet.price[m] || !may_follow(m, to)) continue;
    const auto c = table.cost[0][table.at(m, a)];
    if (c < s.cost) {
      s.cost = c;
      s.market = static_cast<std::uint8_t>(m);
    }
  }
  return s;
}

void check_inputs(Hours n, const PriceSheet& sheet, Hours cap) {
  if (n < 1) throw Error(ErrorCode::kInvalidArgument, "planning period must be at least one hour");
  if (n > cap) {
    throw Error(ErrorCode::kHorizonTooLarge,
                std::to_string(n) + " hours exceeds the oracle cap of " + std::to_string(cap));
  }
  sheet.validate();
}

Hours window_floor(Hours b, Hours period, Hours reach) {
  // Smallest predecessor end such that an interval of at most `period`
  // decisions can still reach b; `reach` is the span added beyond b - a.
  if (period == kUnboundedPeriod) return 1;
  return std::max<Hours>(1, b - period + reach);
}

Plan reconstruct(const Table& table, const PriceSheet& sheet, Hours n, std::size_t last_market) {
  Plan plan;
  plan.n = n;
  std::size_t m = last_market;
  Hours b = n;
  int layer = 0;
  while (true) {
    const Parent& p = table.parent[layer][table.at(m, b)];
    const Marketspace market = static_cast<Marketspace>(m);
    Hours start = 1;
    if (p.kind == EntryKind::kMigration) start = p.from_end;
    if (p.kind == EntryKind::kRenewal) start = p.from_end + 1;
    plan.intervals.push_back(Interval{start, b, market, p.kind, sheet.interval_cost(market, b - start + 1)});
    if (p.kind == EntryKind::kInitial) break;
    m = p.from_market;
    b = p.from_end;
    layer = p.from_full_layer;
  }
  std::reverse(plan.intervals.begin(), plan.intervals.end());
  return plan;
}

std::size_t pick_final(const Table& table, const PriceSheet& sheet, Hours n) {
  std::size_t best = kMarketspaceCount;
  for (std::size_t m = 0; m < kMarketspaceCount; ++m) {
    if (!sheet.price[m]) continue;
    const auto c = table.cost[0][table.at(m, n)];
    if (c < kInf && (best == kMarketspaceCount || c < table.cost[0][table.at(best, n)])) best = m;
  }
  if (best == kMarketspaceCount) throw Error(ErrorCode::kInfeasible, "no interval chain covers the horizon");
  return best;
}

struct WindowEntry {
  Hours a;
  std::int64_t key;
  std::uint8_t market;
};

// Monotone deque: front holds the minimum key, latest a among equals.
class SlidingMin {
 public:
  void push(WindowEntry e) {
    while (!q_.empty() && q_.back().key >= e.key) q_.pop_back();
    q_.push_back(e);
  }
  void expire_before(Hours lowest) {
    while (!q_.empty() && q_.front().a < lowest) q_.pop_front();
  }
  const WindowEntry* front() const { return q_.empty() ? nullptr : &q_.front(); }

 private:
  std::deque<WindowEntry> q_;
};

}  // namespace

Plan dp_optimal(Hours n, const PriceSheet& sheet, Hours cap) {
  check_inputs(n, sheet, cap);
  Table table(n);
  std::array<SlidingMin, kMarketspaceCount> migrate_in;
  std::array<SlidingMin, kMarketspaceCount> renew_in;

  for (Hours b = 1; b <= n; ++b) {
    const Hours a_new = b - 1;
    for (std::size_t to = 0; to < kMarketspaceCount; ++to) {
      if (!sheet.price[to]) continue;
      const Marketspace target = static_cast<Marketspace>(to);
      const std::int64_t price = sheet.price[to]->micros();
      const bool per_term = is_per_term(target);
      const Hours t = sheet.period[to];

      if (a_new >= 1) {
        const Source src = best_source(table, sheet, a_new, to);
        if (src.cost < kInf) {
          const std::int64_t key = per_term ? src.cost : src.cost - (a_new - 1) * price;
          migrate_in[to].push({a_new, key, src.market});
        }
        if (per_term) {
          const auto full = table.cost[1][table.at(to, a_new)];
          if (full < kInf) renew_in[to].push({a_new, full, static_cast<std::uint8_t>(to)});
        }
      }
      migrate_in[to].expire_before(window_floor(b, t, 1));
      renew_in[to].expire_before(window_floor(b, t, 0));

      auto& best = table.cost[0][table.at(to, b)];
      auto& best_parent = table.parent[0][table.at(to, b)];
      auto offer = [&](std::int64_t cost, Parent p, std::int64_t& slot, Parent& slot_parent) {
        if (cost < slot) {
          slot = cost;
          slot_parent = p;
        }
      };
      if (b <= t) offer(per_term ? price : b * price, Parent{}, best, best_parent);
      if (const auto* w = migrate_in[to].front()) {
        const std::int64_t cost = per_term ? w->key + price : w->key + b * price;
        offer(cost, Parent{EntryKind::kMigration, static_cast<std::int32_t>(w->a), w->market, 0}, best, best_parent);
      }
      if (per_term) {
        if (const auto* w = renew_in[to].front()) {
          offer(w->key + price, Parent{EntryKind::kRenewal, static_cast<std::int32_t>(w->a), w->market, 1}, best,
                best_parent);
        }
        // Full-term layer: the last interval spans exactly t decisions.
        auto& full = table.cost[1][table.at(to, b)];
        auto& full_parent = table.parent[1][table.at(to, b)];
        if (b == t) offer(price, Parent{}, full, full_parent);
        if (const Hours a = b - t + 1; a >= 1 && a < b) {
          const Source src = best_source(table, sheet, a, to);
          if (src.cost < kInf) {
            offer(src.cost + price, Parent{EntryKind::kMigration, static_cast<std::int32_t>(a), src.market, 0}, full,
                  full_parent);
          }
        }
        if (const Hours a = b - t; a >= 1) {
          const auto prev_full = table.cost[1][table.at(to, a)];
          if (prev_full < kInf) {
            offer(prev_full + price,
                  Parent{EntryKind::kRenewal, static_cast<std::int32_t>(a), static_cast<std::uint8_t>(to), 1}, full,
                  full_parent);
          }
        }
      }
    }
  }
  return reconstruct(table, sheet, n, pick_final(table, sheet, n));
}

Plan dp_optimal(Hours n, const InstanceType& instance, const Catalog& catalog, const CostModel& model, Hours cap) {
  Plan plan = dp_optimal(n, make_price_sheet(instance, catalog, model), cap);
  plan.instance_type = instance.name;
  return plan;
}

Money dp_optimal_cost_quadratic(Hours n, const PriceSheet& sheet, Hours cap) {
  check_inputs(n, sheet, cap);
  Table table(n);
  for (Hours b = 1; b <= n; ++b) {
    for (std::size_t to = 0; to < kMarketspaceCount; ++to) {
      if (!sheet.price[to]) continue;
      const Marketspace target = static_cast<Marketspace>(to);
      const Hours t = sheet.period[to];
      auto cost_of = [&](Hours start) { return sheet.interval_cost(target, b - start + 1).micros(); };
      auto& best = table.cost[0][table.at(to, b)];
      auto& full = table.cost[1][table.at(to, b)];
      auto consider = [&](std::int64_t base, Hours start) {
        if (base >= kInf || b - start + 1 > t) return;
        const std::int64_t total = base + cost_of(start);
        best = std::min(best, total);
        if (is_per_term(target) && b - start + 1 == t) full = std::min(full, total);
      };
      consider(0, 1);
      for (Hours a = 1; a < b; ++a) {
        for (std::size_t from = 0; from < kMarketspaceCount; ++from) {
          if (sheet.price[from] && may_follow(from, to)) consider(table.cost[0][table.at(from, a)], a);
        }
        if (is_per_term(target)) consider(table.cost[1][table.at(to, a)], a + 1);
      }
    }
  }
  return Money::from_micros(table.cost[0][table.at(pick_final(table, sheet, n), n)]);
}

MismatchReport validate_greedy(std::span<const ValidationCase> cases, const GreedyOptions& options, Hours cap,
                               double gap_threshold) {
  MismatchReport report;
  for (const auto& c : cases) {
    ++report.cases;
    Plan greedy = plan_vm_with_migration(c.n, c.sheet, options);
    Plan exact = dp_optimal(c.n, c.sheet, cap);
    if (auto problem = check_plan(greedy, &c.sheet)) report.violations.push_back(c.case_id + " greedy: " + *problem);
    if (auto problem = check_plan(exact, &c.sheet)) report.violations.push_back(c.case_id + " dp: " + *problem);
    const Money g = greedy.total_cost();
    const Money d = exact.total_cost();
    if (g < d) report.violations.push_back(c.case_id + ": greedy cheaper than the oracle");
    double gap = 0.0;
    if (d.micros() > 0) {
      gap = static_cast<double>(g.micros() - d.micros()) / static_cast<double>(d.micros());
    } else if (g.micros() > 0) {
      gap = std::numeric_limits<double>::infinity();
    }
    if (gap > gap_threshold) {
      report.mismatches.push_back(CaseResult{c.case_id, c.n, g, d, gap, c.seed, std::move(greedy), std::move(exact)});
    }
  }
  return report;
}

}  // namespace cloudfolio
