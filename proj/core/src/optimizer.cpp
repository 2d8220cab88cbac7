#include "cloudfolio/optimizer.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <thread>

#include "cloudfolio/error.hpp"
#include "text_util.hpp"

namespace cloudfolio {

double avg_cost(Marketspace m, double c, Hours l, int k, std::optional<Hours> period) {
  if (k != 0 && k != 1) throw Error(ErrorCode::kInvalidArgument, "k must be 0 or 1");
  if (l < 0) throw Error(ErrorCode::kInvalidArgument, "l must be non-negative");
  switch (m) {
    case Marketspace::kSM:
    case Marketspace::kODM:
      if (k == 0) return c;
      if (l == 0) throw Error(ErrorCode::kDivisionGuard, "l = 0 with a migration share");
      return c + c / static_cast<double>(l);
    case Marketspace::kH1SM:
      if (k == 1) throw Error(ErrorCode::kH1smBeyondOneHour, "1-hour spot block cannot be followed by a migration");
      return c;
    case Marketspace::kH6SM: {
      const Hours t = period.value_or(default_contract_period(m));
      if (k == 1 && t <= 1) throw Error(ErrorCode::kDivisionGuard, "H6SM period too short for a migration share");
      return k == 0 ? c : c + c / static_cast<double>(t - 1);
    }
    case Marketspace::kYR1M:
    case Marketspace::kYR3M: {
      const Hours slots = l + 1 - k;
      if (slots <= 0) throw Error(ErrorCode::kDivisionGuard, "reservation holds no net slot");
      return c / static_cast<double>(slots);
    }
  }
  return c;
}

namespace {

struct Candidate {
  Marketspace m = Marketspace::kODM;
  EntryKind entry = EntryKind::kInitial;
  Hours start = 1;
  Hours span = 1;
  Money cost;
  Hours net_slots = 1;  // slots this step owns exclusively (denominator of the average)
  bool chain = false;
};

// Exact comparison of cost / net_slots.
bool cheaper(const Candidate& a, const Candidate& b) {
  return static_cast<detail::Int128>(a.cost.micros()) * b.net_slots < static_cast<detail::Int128>(b.cost.micros()) * a.net_slots;
}

Hours chain_links(Hours remaining, Hours period) { return (remaining - 1 + period - 2) / (period - 1); }

void append_chain(Plan& plan, Hours start, EntryKind first_entry, Hours period, Money hourly) {
  Hours s = start;
  EntryKind entry = first_entry;
  while (true) {
    const Hours e = std::min(s + period - 1, plan.n);
    plan.intervals.push_back(Interval{s, e, Marketspace::kH6SM, entry, hourly * (e - s + 1)});
    if (e == plan.n) break;
    s = e;
    entry = EntryKind::kMigration;
  }
}

Plan greedy(Hours n, const PriceSheet& sheet, bool lookahead) {
  Plan plan;
  plan.n = n;
  Hours frontier = 0;
  std::optional<Marketspace> prev;
  bool prev_full_term = false;
  std::vector<Candidate> candidates;
  while (frontier < n) {
    candidates.clear();
    for (const Marketspace m : kAllMarketspaces) {
      if (!sheet.has(m)) continue;
      const Hours t = sheet.period_of(m);
      if (prev_full_term && prev == m) {
        const Hours remaining = n - frontier;
        const Hours span = std::min(remaining, t);
        const Hours net = remaining <= t ? remaining : std::max<Hours>(t - 1, 1);
        candidates.push_back({m, EntryKind::kRenewal, frontier + 1, span, sheet.at(m), net, false});
        continue;
      }
      if (prev == m && m != Marketspace::kH6SM) continue;
      const Hours start = frontier == 0 ? 1 : frontier;
      const EntryKind entry = frontier == 0 ? EntryKind::kInitial : EntryKind::kMigration;
      const Hours remaining = n - start + 1;
      if (remaining <= t) {
        candidates.push_back({m, entry, start, remaining, sheet.interval_cost(m, remaining), remaining, false});
      } else if (t >= 2) {
        candidates.push_back({m, entry, start, t, sheet.interval_cost(m, t), t - 1, false});
      } else if (is_per_term(m) && frontier == 0) {
        // One-hour terms continue by renewal; entered by migration they would not advance.
        candidates.push_back({m, entry, start, 1, sheet.at(m), 1, false});
      }
      if (m == Marketspace::kH6SM && lookahead && remaining > t && t >= 2) {
        const Hours decisions = remaining + chain_links(remaining, t) - 1;
        candidates.push_back({m, entry, start, remaining, sheet.at(m) * decisions, remaining, true});
      }
    }
    if (candidates.empty()) {
      throw Error(ErrorCode::kInfeasible, "no marketspace can continue the plan at hour " + std::to_string(frontier));
    }
    const Candidate* best = &candidates.front();
    for (const auto& c : candidates) {
      if (cheaper(c, *best)) best = &c;
    }
    if (best->chain) {
      append_chain(plan, best->start, best->entry, sheet.period_of(Marketspace::kH6SM), sheet.at(Marketspace::kH6SM));
      frontier = n;
      break;
    }
    const Hours end = best->start + best->span - 1;
    plan.intervals.push_back(Interval{best->start, end, best->m, best->entry, best->cost});
    frontier = end;
    prev = best->m;
    prev_full_term = is_per_term(best->m) && best->span == sheet.period_of(best->m);
  }
  return plan;
}

void require_horizon(Hours n) {
  if (n < 1) throw Error(ErrorCode::kInvalidArgument, "planning period must be at least one hour");
}

}  // namespace

Plan plan_vm_with_migration(Hours n, const PriceSheet& sheet, const GreedyOptions& options) {
  require_horizon(n);
  sheet.validate();
  std::optional<Plan> plan;
  try {
    plan = greedy(n, sheet, options.same_length_lookahead);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kInfeasible || !options.static_fallback) throw;
  }
  if (options.static_fallback) {
    try {
      Plan fixed = plan_vm_no_migration(n, sheet);
      if (!plan || fixed.total_cost() < plan->total_cost()) plan = std::move(fixed);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kInfeasible || !plan) throw;
    }
  }
  return std::move(*plan);
}

Plan plan_vm_with_migration(Hours n, const InstanceType& instance, const Catalog& catalog, const CostModel& model,
                            const GreedyOptions& options) {
  Plan plan = plan_vm_with_migration(n, make_price_sheet(instance, catalog, model), options);
  plan.instance_type = instance.name;
  return plan;
}

std::optional<Money> single_marketspace_cost(Hours n, Marketspace m, const PriceSheet& sheet) {
  if (!sheet.has(m)) return std::nullopt;
  const Hours t = sheet.period_of(m);
  if (is_per_term(m)) return sheet.at(m) * ((n + t - 1) / t);
  if (n > t) return std::nullopt;
  return sheet.at(m) * n;
}

Plan single_marketspace_plan(Hours n, Marketspace m, const PriceSheet& sheet) {
  if (!single_marketspace_cost(n, m, sheet)) {
    throw Error(ErrorCode::kInfeasible, std::string(symbol(m)) + " cannot host " + std::to_string(n) + " hours alone");
  }
  Plan plan;
  plan.n = n;
  if (!is_per_term(m)) {
    plan.intervals.push_back(Interval{1, n, m, EntryKind::kInitial, sheet.at(m) * n});
    return plan;
  }
  const Hours t = sheet.period_of(m);
  for (Hours s = 1; s <= n; s += t) {
    plan.intervals.push_back(
        Interval{s, std::min(s + t - 1, n), m, s == 1 ? EntryKind::kInitial : EntryKind::kRenewal, sheet.at(m)});
  }
  return plan;
}

Plan plan_vm_no_migration(Hours n, const PriceSheet& sheet) {
  require_horizon(n);
  std::optional<Marketspace> best;
  Money best_cost;
  for (const Marketspace m : kAllMarketspaces) {
    const auto cost = single_marketspace_cost(n, m, sheet);
    if (cost && (!best || *cost < best_cost)) {
      best = m;
      best_cost = *cost;
    }
  }
  if (!best) throw Error(ErrorCode::kInfeasible, "no single marketspace can host " + std::to_string(n) + " hours");
  return single_marketspace_plan(n, *best, sheet);
}

Plan plan_vm_no_migration(Hours n, const InstanceType& instance, const Catalog& catalog, const CostModel& model) {
  Plan plan = plan_vm_no_migration(n, make_price_sheet(instance, catalog, model));
  plan.instance_type = instance.name;
  return plan;
}

std::string_view to_string(Regime regime) {
  switch (regime) {
    case Regime::kHomogeneous: return "homogeneous";
    case Regime::kNoMigration: return "no-migration";
    case Regime::kWithMigration: return "with-migration";
  }
  return "?";
}

Timeline::Timeline(Hours n) : n_(n) {
  for (auto& v : counts_) v.assign(static_cast<std::size_t>(n) + 1, 0);
}

void Timeline::materialize() const {
  if (prefix_done_) return;
  for (auto& v : counts_) {
    for (std::size_t i = 1; i < v.size(); ++i) v[i] += v[i - 1];
  }
  prefix_done_ = true;
}

void Timeline::add(const Plan& plan, std::int64_t multiplicity) {
  if (plan.n != n_) throw Error(ErrorCode::kMixedHorizons, "plan horizon differs from timeline horizon");
  if (prefix_done_) {
    for (auto& v : counts_) {
      for (std::size_t i = v.size(); i-- > 1;) v[i] -= v[i - 1];
    }
    prefix_done_ = false;
  }
  for (const auto& iv : plan.intervals) {
    auto& v = counts_[index_of(iv.marketspace)];
    v[static_cast<std::size_t>(iv.start - 1)] += multiplicity;
    v[static_cast<std::size_t>(iv.end)] -= multiplicity;
  }
}

void Timeline::merge(const Timeline& other) {
  if (other.n_ != n_) throw Error(ErrorCode::kMixedHorizons, "timeline horizons differ");
  materialize();
  other.materialize();
  for (std::size_t m = 0; m < kMarketspaceCount; ++m) {
    for (std::size_t i = 0; i < counts_[m].size(); ++i) counts_[m][i] += other.counts_[m][i];
  }
}

std::int64_t Timeline::count(Hours hour, Marketspace m) const {
  if (hour < 1 || hour > n_) return 0;
  materialize();
  return counts_[index_of(m)][static_cast<std::size_t>(hour - 1)];
}

std::int64_t Timeline::total(Hours hour) const {
  std::int64_t sum = 0;
  for (auto m : kAllMarketspaces) sum += count(hour, m);
  return sum;
}

PortfolioReport aggregate(std::span<const Plan> plans, Regime regime) {
  PortfolioReport report;
  report.regime = regime;
  if (plans.empty()) return report;
  report.n = plans.front().n;
  report.timeline = Timeline(report.n);
  for (const auto& plan : plans) {
    if (plan.n != report.n) throw Error(ErrorCode::kMixedHorizons, "plan '" + plan.vm_id + "' uses another horizon");
    report.timeline.add(plan);
    report.total += plan.total_cost();
  }
  report.vm_count = plans.size();
  report.plans.assign(plans.begin(), plans.end());
  report.avg_per_vm_hour = usd_per_hour(report.total, report.n * static_cast<Hours>(report.vm_count));
  return report;
}

HomogeneousChoice choose_homogeneous(Hours n, std::span<const PriceSheet> sheets) {
  HomogeneousChoice choice;
  for (const Marketspace m : kAllMarketspaces) {
    std::optional<Money> total = Money{};
    for (const auto& sheet : sheets) {
      const auto cost = single_marketspace_cost(n, m, sheet);
      if (!cost) {
        total.reset();
        break;
      }
      *total += *cost;
    }
    if (sheets.empty()) total.reset();
    choice.totals[index_of(m)] = total;
    if (total && (!choice.winner || *total < *choice.totals[index_of(*choice.winner)])) choice.winner = m;
  }
  return choice;
}

PortfolioReport plan_homogeneous(Hours n, std::span<const PortfolioVm> vms, const Catalog& catalog,
                                 const CostModel& model, const VariantFilter& filter) {
  PortfolioOptions options;
  options.regime = Regime::kHomogeneous;
  options.variants = filter;
  options.keep_plans = true;
  return plan_portfolio(n, vms, catalog, model, options);
}

PortfolioReport plan_portfolio(Hours n, std::span<const PortfolioVm> vms, const Catalog& catalog,
                               const CostModel& model, const PortfolioOptions& options) {
  require_horizon(n);
  PortfolioReport report;
  report.regime = options.regime;
  report.n = n;
  report.vm_count = vms.size();
  report.timeline = Timeline(n);
  if (vms.empty()) return report;

  // Distinct instance types in first-appearance order.
  std::vector<const InstanceType*> types;
  std::vector<std::size_t> type_of_vm(vms.size());
  std::map<std::string_view, std::size_t> type_index;
  for (std::size_t i = 0; i < vms.size(); ++i) {
    if (vms[i].instance == nullptr) throw Error(ErrorCode::kInvalidArgument, "VM '" + vms[i].vm_id + "' has no type");
    auto [it, inserted] = type_index.try_emplace(vms[i].instance->name, types.size());
    if (inserted) types.push_back(vms[i].instance);
    type_of_vm[i] = it->second;
  }
  std::vector<std::int64_t> multiplicity(types.size(), 0);
  for (auto t : type_of_vm) ++multiplicity[t];

  std::vector<PriceSheet> sheets(types.size());
  for (std::size_t t = 0; t < types.size(); ++t) {
    sheets[t] = make_price_sheet(*types[t], catalog, model, options.variants);
  }

  std::vector<Plan> plans(types.size());
  if (options.regime == Regime::kHomogeneous) {
    std::vector<PriceSheet> per_vm;
    per_vm.reserve(vms.size());
    for (auto t : type_of_vm) per_vm.push_back(sheets[t]);
    const auto choice = choose_homogeneous(n, per_vm);
    if (!choice.winner) throw Error(ErrorCode::kInfeasible, "no marketspace can host the whole portfolio");
    report.homogeneous_totals = choice.totals;
    report.homogeneous_winner = choice.winner;
    for (std::size_t t = 0; t < types.size(); ++t) plans[t] = single_marketspace_plan(n, *choice.winner, sheets[t]);
  } else {
    auto plan_one = [&](std::size_t t) {
      plans[t] = options.regime == Regime::kNoMigration ? plan_vm_no_migration(n, sheets[t])
                                                        : plan_vm_with_migration(n, sheets[t], options.greedy);
    };
    const unsigned workers = std::max(1u, std::min<unsigned>(options.workers, static_cast<unsigned>(types.size())));
    if (workers == 1) {
      for (std::size_t t = 0; t < types.size(); ++t) plan_one(t);
    } else {
      std::atomic<std::size_t> next{0};
      std::vector<std::exception_ptr> errors(workers);
      std::vector<std::thread> pool;
      for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
          try {
            for (std::size_t t = next++; t < types.size(); t = next++) plan_one(t);
          } catch (...) {
            errors[w] = std::current_exception();
          }
        });
      }
      for (auto& th : pool) th.join();
      for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
      }
    }
  }

  for (std::size_t t = 0; t < types.size(); ++t) {
    plans[t].instance_type = types[t]->name;
    require_valid_plan(plans[t], &sheets[t]);
    report.timeline.add(plans[t], multiplicity[t]);
    report.total += plans[t].total_cost() * multiplicity[t];
  }
  if (options.keep_plans) {
    report.plans.reserve(vms.size());
    for (std::size_t i = 0; i < vms.size(); ++i) {
      report.plans.push_back(plans[type_of_vm[i]]);
      report.plans.back().vm_id = vms[i].vm_id;
    }
  }
  report.avg_per_vm_hour = usd_per_hour(report.total, n * static_cast<Hours>(vms.size()));
  return report;
}

}  // namespace cloudfolio
