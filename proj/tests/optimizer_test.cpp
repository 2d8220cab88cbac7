#include <gtest/gtest.h>

#include <random>

#include "cloudfolio/error.hpp"
#include "cloudfolio/optimizer.hpp"
#include "sheet_util.hpp"

namespace cloudfolio {
namespace {

using testing::sheet_of;
using testing::usd;
using M = Marketspace;

const Catalog& sample() {
  static const Catalog catalog = load_catalog(CLOUDFOLIO_SAMPLE_CATALOG);
  return catalog;
}

// Six-hour-spot chain beats a one-year reservation over ten hours.
PriceSheet chain_scenario() {
  return sheet_of({{M::kSM, "10"}, {M::kH1SM, "10"}, {M::kH6SM, "1"}, {M::kODM, "10"}, {M::kYR1M, "11.5"},
                   {M::kYR3M, "262800"}});
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kInvariantViolation;
}

TEST(AvgCost, AverageCostFunctions) {
  EXPECT_DOUBLE_EQ(avg_cost(M::kH6SM, 1.0, 5, 1), 1.2);
  EXPECT_DOUBLE_EQ(avg_cost(M::kH6SM, 1.0, 5, 0), 1.0);
  EXPECT_DOUBLE_EQ(avg_cost(M::kYR1M, 8760.0, 8759, 0), 1.0);
  EXPECT_DOUBLE_EQ(avg_cost(M::kYR1M, 8760.0, 8759, 1), 8760.0 / 8759.0);
  EXPECT_DOUBLE_EQ(avg_cost(M::kODM, 2.0, 0, 0), 2.0);
  EXPECT_DOUBLE_EQ(avg_cost(M::kSM, 2.0, 4, 1), 2.5);
  EXPECT_DOUBLE_EQ(avg_cost(M::kH1SM, 0.3, 0, 0), 0.3);
  EXPECT_EQ(code_of([] { avg_cost(M::kH1SM, 0.3, 0, 1); }), ErrorCode::kH1smBeyondOneHour);
  EXPECT_EQ(code_of([] { avg_cost(M::kODM, 1.0, 0, 1); }), ErrorCode::kDivisionGuard);
  EXPECT_EQ(code_of([] { avg_cost(M::kYR1M, 1.0, 0, 1); }), ErrorCode::kDivisionGuard);
}

TEST(Greedy, LookaheadChainsSixHourSpot) {
  const Plan plan = plan_vm_with_migration(10, chain_scenario());
  ASSERT_EQ(plan.intervals.size(), 2u);
  EXPECT_EQ(plan.intervals[0].marketspace, M::kH6SM);
  EXPECT_EQ(plan.intervals[0].start, 1);
  EXPECT_EQ(plan.intervals[0].end, 6);
  EXPECT_EQ(plan.intervals[1].marketspace, M::kH6SM);
  EXPECT_EQ(plan.intervals[1].start, 6);
  EXPECT_EQ(plan.intervals[1].end, 10);
  EXPECT_TRUE(plan.intervals[1].entered_by_migration());
  EXPECT_EQ(plan.total_cost(), usd("11"));
}

TEST(Greedy, WithoutLookaheadPicksReservation) {
  const Plan plan = plan_vm_with_migration(10, chain_scenario(), GreedyOptions{false, false});
  ASSERT_EQ(plan.intervals.size(), 1u);
  EXPECT_EQ(plan.intervals[0].marketspace, M::kYR1M);
  EXPECT_EQ(plan.total_cost(), usd("11.5"));
}

TEST(Greedy, ExactContractFitNeedsNoMigration) {
  const Plan plan = plan_vm_with_migration(6, sheet_of({{M::kH6SM, "1"}, {M::kODM, "2"}}));
  ASSERT_EQ(plan.intervals.size(), 1u);
  EXPECT_EQ(plan.intervals[0].end, 6);
  EXPECT_EQ(plan.migrations(), 0u);
  EXPECT_EQ(plan.total_cost(), usd("6"));
}

TEST(Greedy, OneFullReservationTerm) {
  const Plan plan = plan_vm_with_migration(8760, sheet_of({{M::kODM, "1"}, {M::kSM, "0.9"}, {M::kYR1M, "5000"}}));
  ASSERT_EQ(plan.intervals.size(), 1u);
  EXPECT_EQ(plan.intervals[0].marketspace, M::kYR1M);
  EXPECT_EQ(plan.total_cost(), usd("5000"));
}

TEST(Greedy, MatchesAverageCostFormula) {
  // Non-terminal H6SM vs terminal ODM at 1.19/h over 13 hours: single block
  // averages 1.2, chain averages (13 + 3 - 1)/13.
  const auto sheet = sheet_of({{M::kH6SM, "1"}, {M::kODM, "1.19"}});
  const double chain_avg = 15.0 / 13.0;
  ASSERT_LT(chain_avg, avg_cost(M::kODM, 1.19, 0, 0));
  const Plan plan = plan_vm_with_migration(13, sheet);
  EXPECT_EQ(plan.total_cost(), usd("15"));
  EXPECT_EQ(plan.intervals.size(), 3u);
}

TEST(Greedy, InfeasibleWithoutContinuation) {
  EXPECT_EQ(code_of([] { plan_vm_with_migration(3, sheet_of({{M::kH1SM, "1"}})); }), ErrorCode::kInfeasible);
  EXPECT_EQ(plan_vm_with_migration(1, sheet_of({{M::kH1SM, "1"}})).total_cost(), usd("1"));
}

TEST(NoMigration, PayingTheFeeTwiceLoses) {
  // Enumerate every single-marketspace option by hand.
  const auto sheet = sheet_of({{M::kSM, "0.95"}, {M::kH6SM, "0.5"}, {M::kODM, "1"}, {M::kYR1M, "8000"}});
  const Hours n = 8761;
  ASSERT_LT(8000.0 / 8760.0, 0.95);
  ASSERT_GT(2 * 8000.0 / 8761.0, 0.95);
  EXPECT_FALSE(single_marketspace_cost(n, M::kH6SM, sheet));
  EXPECT_EQ(*single_marketspace_cost(n, M::kYR1M, sheet), usd("16000"));
  EXPECT_EQ(*single_marketspace_cost(n, M::kSM, sheet), usd("8322.95"));
  const Plan plan = plan_vm_no_migration(n, sheet);
  ASSERT_EQ(plan.intervals.size(), 1u);
  EXPECT_EQ(plan.intervals[0].marketspace, M::kSM);
  EXPECT_EQ(plan.total_cost(), usd("8322.95"));
}

TEST(NoMigration, RenewsReservationsBackToBack) {
  const auto sheet = sheet_of({{M::kODM, "1"}, {M::kYR1M, "5000"}});
  const Plan plan = plan_vm_no_migration(17520, sheet);
  ASSERT_EQ(plan.intervals.size(), 2u);
  EXPECT_EQ(plan.intervals[1].entry, EntryKind::kRenewal);
  EXPECT_EQ(plan.intervals[1].start, 8761);
  EXPECT_EQ(plan.total_cost(), usd("10000"));
  EXPECT_FALSE(check_plan(plan, &sheet));
}

TEST(NoMigration, FeasibilityRules) {
  const auto sheet = sheet_of({{M::kH1SM, "0.1"}, {M::kH6SM, "0.2"}, {M::kODM, "1"}});
  EXPECT_EQ(plan_vm_no_migration(1, sheet).intervals[0].marketspace, M::kH1SM);
  EXPECT_EQ(plan_vm_no_migration(6, sheet).intervals[0].marketspace, M::kH6SM);
  EXPECT_EQ(plan_vm_no_migration(7, sheet).intervals[0].marketspace, M::kODM);
}

std::vector<PortfolioVm> sample_portfolio() {
  std::vector<PortfolioVm> vms;
  for (const char* name : {"t3.nano", "t3.nano", "m5.large", "r5.4xlarge", "c5.xlarge"}) {
    vms.push_back({std::string(name) + "#" + std::to_string(vms.size()), &sample().at(name)});
  }
  return vms;
}

TEST(Homogeneous, SpotWinsWithoutPenalty) {
  const auto vms = sample_portfolio();
  for (Hours n : {1, 6, 7, 24, 8760, 26280}) {
    const auto report = plan_homogeneous(n, vms, sample(), CostModel{});
    ASSERT_TRUE(report.homogeneous_winner);
    EXPECT_EQ(*report.homogeneous_winner, M::kSM) << n;
    EXPECT_EQ(report.plans.size(), vms.size());
  }
}

TEST(Homogeneous, CandidateFeasibility) {
  const auto vms = sample_portfolio();
  EXPECT_TRUE(plan_homogeneous(1, vms, sample(), CostModel{}).homogeneous_totals[index_of(M::kH1SM)]);
  const auto two = plan_homogeneous(2, vms, sample(), CostModel{});
  EXPECT_FALSE(two.homogeneous_totals[index_of(M::kH1SM)]);
  EXPECT_TRUE(two.homogeneous_totals[index_of(M::kH6SM)]);
  EXPECT_FALSE(plan_homogeneous(7, vms, sample(), CostModel{}).homogeneous_totals[index_of(M::kH6SM)]);
}

TEST(Homogeneous, ReservationAmortization) {
  const auto vms = sample_portfolio();
  const auto report = plan_homogeneous(8760, vms, sample(), CostModel{});
  Money fees;
  for (const auto& vm : vms) fees += term_fee(*vm.instance, M::kYR1M, sample());
  EXPECT_EQ(*report.homogeneous_totals[index_of(M::kYR1M)], fees);
}

TEST(Aggregate, OverlapHourCountsTwice) {
  Plan plan = plan_vm_with_migration(10, chain_scenario());
  plan.vm_id = "vm";
  const auto report = aggregate(std::vector<Plan>{plan});
  for (Hours h = 1; h <= 10; ++h) EXPECT_EQ(report.timeline.count(h, M::kH6SM), h == 6 ? 2 : 1) << h;
  EXPECT_EQ(report.total, usd("11"));
  EXPECT_DOUBLE_EQ(report.avg_per_vm_hour, 1.1);
}

TEST(Aggregate, ConstantTimelineAndErrors) {
  const auto sheet = sheet_of({{M::kSM, "0.5"}});
  std::vector<Plan> plans = {plan_vm_no_migration(3, sheet), plan_vm_no_migration(3, sheet)};
  const auto report = aggregate(plans);
  for (Hours h = 1; h <= 3; ++h) EXPECT_EQ(report.timeline.count(h, M::kSM), 2);
  plans.push_back(plan_vm_no_migration(4, sheet));
  EXPECT_EQ(code_of([&] { aggregate(plans); }), ErrorCode::kMixedHorizons);
  const auto empty = aggregate({});
  EXPECT_EQ(empty.total, Money{});
  EXPECT_EQ(empty.vm_count, 0u);
}

TEST(Portfolio, RegimesAreOrderedAndTimelinesCover) {
  const auto vms = sample_portfolio();
  for (std::int64_t penalty : {0, 100, 500, 1000}) {
    CostModel model;
    model.penalty = Money::from_micros(penalty * 1'000'000);
    for (Hours n : {1, 5, 7, 10, 24, 720, 8761, 17520}) {
      PortfolioOptions options;
      std::array<Money, 3> totals;
      for (const auto regime : kAllRegimes) {
        options.regime = regime;
        const auto report = plan_portfolio(n, vms, sample(), model, options);
        totals[static_cast<std::size_t>(regime)] = report.total;
        for (Hours h : {Hours{1}, n / 2 + 1, n}) EXPECT_GE(report.timeline.total(h), static_cast<std::int64_t>(vms.size()));
      }
      EXPECT_LE(totals[2], totals[1]) << penalty << " " << n;
      EXPECT_LE(totals[1], totals[0]) << penalty << " " << n;
    }
  }
}

TEST(Portfolio, WorkersDoNotChangeResults) {
  const auto vms = sample_portfolio();
  PortfolioOptions serial;
  serial.keep_plans = true;
  PortfolioOptions parallel = serial;
  parallel.workers = 4;
  CostModel model;
  model.penalty = usd("500");
  const auto a = plan_portfolio(26280, vms, sample(), model, serial);
  const auto b = plan_portfolio(26280, vms, sample(), model, parallel);
  EXPECT_EQ(a.total, b.total);
  ASSERT_EQ(a.plans.size(), b.plans.size());
  for (std::size_t i = 0; i < a.plans.size(); ++i) {
    EXPECT_EQ(a.plans[i].vm_id, vms[i].vm_id);
    EXPECT_EQ(a.plans[i].intervals.size(), b.plans[i].intervals.size());
  }
}

TEST(Portfolio, ZeroPenaltyCheapSpotIsAllSpot) {
  for (const auto& type : sample().instance_types()) {
    const PriceSheet sheet = make_price_sheet(type, sample(), CostModel{});
    const Money sm = sheet.at(M::kSM);
    ASSERT_LT(sm, sheet.at(M::kH1SM));
    ASSERT_LT(sm, sheet.at(M::kH6SM));
    ASSERT_LT(sm, sheet.at(M::kODM));
    ASSERT_LT(sm * 8760, sheet.at(M::kYR1M));
    ASSERT_LT(sm * 26280, sheet.at(M::kYR3M));
  }
  const std::vector<PortfolioVm> vms = sample_portfolio();
  for (Hours n : {1, 7, 24, 8760, 26280}) {
    std::optional<Money> first;
    for (const auto regime : kAllRegimes) {
      PortfolioOptions options;
      options.regime = regime;
      options.keep_plans = true;
      const auto report = plan_portfolio(n, vms, sample(), CostModel{}, options);
      for (const auto& plan : report.plans) {
        ASSERT_EQ(plan.intervals.size(), 1u);
        EXPECT_EQ(plan.intervals[0].marketspace, M::kSM);
      }
      if (!first) first = report.total;
      EXPECT_EQ(report.total, *first);
    }
  }
}

TEST(PlanChecks, StructuralInvariantsOnRandomPlans) {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 2000; ++i) {
    const auto sheet = testing::random_small_sheet(rng);
    const Hours n = 1 + static_cast<Hours>(rng() % 60);
    for (const Plan& plan : {plan_vm_with_migration(n, sheet), plan_vm_no_migration(n, sheet),
                             plan_vm_with_migration(n, sheet, GreedyOptions{false, false})}) {
      EXPECT_FALSE(check_plan(plan, &sheet)) << *check_plan(plan, &sheet);
      EXPECT_EQ(plan.decision_total(), n + static_cast<Hours>(plan.migrations()));
    }
    const Plan greedy = plan_vm_with_migration(n, sheet, GreedyOptions{true, false});
    EXPECT_TRUE(is_locally_optimal(greedy, sheet));
    EXPECT_LE(plan_vm_with_migration(n, sheet).total_cost(), plan_vm_no_migration(n, sheet).total_cost());
  }
}

TEST(PlanChecks, RejectsBrokenPlans) {
  const auto sheet = sheet_of({{M::kSM, "1"}, {M::kH6SM, "1"}, {M::kODM, "2"}, {M::kYR1M, "3"}});
  auto plan_of = [](Hours n, std::vector<Interval> ivs) { return Plan{"vm", "t", n, std::move(ivs)}; };
  const Money one = usd("1");
  // gap between intervals
  EXPECT_TRUE(check_plan(plan_of(4, {{1, 2, M::kSM, EntryKind::kInitial, one * 2},
                                     {3, 4, M::kODM, EntryKind::kMigration, usd("4")}}), &sheet));
  // spot to spot is a merge, not a migration
  EXPECT_TRUE(check_plan(plan_of(4, {{1, 2, M::kSM, EntryKind::kInitial, one * 2},
                                     {2, 4, M::kSM, EntryKind::kMigration, one * 3}}), &sheet));
  // six-hour cap
  EXPECT_TRUE(check_plan(plan_of(7, {{1, 7, M::kH6SM, EntryKind::kInitial, one * 7}}), &sheet));
  // renewal after a partial term
  EXPECT_TRUE(check_plan(plan_of(8762, {{1, 5, M::kYR1M, EntryKind::kInitial, usd("3")},
                                        {6, 8762, M::kYR1M, EntryKind::kRenewal, usd("3")}}), &sheet));
  // wrong cost, short coverage
  EXPECT_TRUE(check_plan(plan_of(3, {{1, 3, M::kSM, EntryKind::kInitial, one}}), &sheet));
  EXPECT_TRUE(check_plan(plan_of(4, {{1, 3, M::kSM, EntryKind::kInitial, one * 3}}), &sheet));
  // a valid extension chain
  EXPECT_FALSE(check_plan(plan_of(8, {{1, 6, M::kH6SM, EntryKind::kInitial, one * 6},
                                      {6, 8, M::kH6SM, EntryKind::kMigration, one * 3}}), &sheet));
  EXPECT_THROW(require_valid_plan(plan_of(3, {}), &sheet), Error);
}

TEST(PlanChecks, LocalOptimalityDetectsShortReservation) {
  const auto sheet = sheet_of({{M::kODM, "1"}, {M::kYR1M, "3"}});
  Plan plan{"vm", "t", 20, {{1, 5, M::kYR1M, EntryKind::kInitial, usd("3")},
                            {5, 20, M::kODM, EntryKind::kMigration, usd("16")}}};
  EXPECT_FALSE(is_locally_optimal(plan, sheet));
}

}  // namespace
}  // namespace cloudfolio
