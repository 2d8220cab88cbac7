#include <array>
#include <cmath>
#include <random>

#include "cloudfolio/oracle.hpp"

namespace cloudfolio {

namespace {

// Integer-only draws so that suites are identical across standard libraries.
std::int64_t draw(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
  return lo + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

std::int64_t scale_permille(std::int64_t micros, std::int64_t permille) { return micros * permille / 1000; }

}  // namespace

std::vector<ValidationCase> structured_suite(std::uint64_t seed) {
  constexpr int kCatalogs = 256;
  constexpr std::array<std::int64_t, 4> kPenalties = {0, 100, 500, 1000};
  std::vector<Hours> horizons;
  for (Hours n = 1; n <= 48; ++n) horizons.push_back(n);
  horizons.insert(horizons.end(), {100, 500, 2000});

  std::vector<ValidationCase> cases;
  for (int c = 0; c < kCatalogs; ++c) {
    const std::uint64_t catalog_seed = seed + static_cast<std::uint64_t>(c);
    std::mt19937_64 rng(catalog_seed);
    const std::int64_t odm = draw(rng, 10'000, 5'000'000);
    InstanceType type{"synthetic." + std::to_string(c), 2, 2500.0, 8.0,
                      static_cast<InterruptionBucket>(draw(rng, 0, kBucketCount - 1))};
    auto hourly = [&](Marketspace m, std::int64_t lo, std::int64_t hi) {
      return PriceEntry{type.name, m, "default", Money::from_micros(scale_permille(odm, draw(rng, lo, hi))),
                        PriceUnit::kPerHour};
    };
    auto fee = [&](Marketspace m, std::int64_t lo, std::int64_t hi) {
      const std::int64_t per_hour = scale_permille(odm, draw(rng, lo, hi));
      return PriceEntry{type.name, m, "default", Money::from_micros(per_hour * default_contract_period(m)),
                        PriceUnit::kPerTerm};
    };
    std::vector<PriceEntry> prices = {
        hourly(Marketspace::kSM, 220, 380),     hourly(Marketspace::kH1SM, 450, 550),
        hourly(Marketspace::kH6SM, 600, 700),   PriceEntry{type.name, Marketspace::kODM, "default",
                                                           Money::from_micros(odm), PriceUnit::kPerHour},
        fee(Marketspace::kYR1M, 550, 700),      fee(Marketspace::kYR3M, 400, 500),
    };
    const Catalog catalog({type}, std::move(prices));
    for (const auto penalty : kPenalties) {
      CostModel model;
      model.penalty = Money::from_micros(penalty * 1'000'000);
      const PriceSheet sheet = make_price_sheet(catalog.instance_types().front(), catalog, model);
      for (const Hours n : horizons) {
        cases.push_back(ValidationCase{"s" + std::to_string(c) + "-p" + std::to_string(penalty) + "-n" + std::to_string(n),
                                       n, sheet, catalog_seed});
      }
    }
  }
  return cases;
}

std::vector<ValidationCase> random_suite(std::size_t count, std::uint64_t seed) {
  std::vector<ValidationCase> cases;
  cases.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::uint64_t case_seed = seed * 1'000'003ULL + i;
    std::mt19937_64 rng(case_seed);
    PriceSheet sheet;
    for (const Marketspace m : kAllMarketspaces) {
      if (draw(rng, 0, 1) == 0) continue;
      sheet.price[index_of(m)] = Money::from_micros(draw(rng, 1'000, 2'000'000));
    }
    if (!sheet.has(Marketspace::kSM) && !sheet.has(Marketspace::kODM)) {
      sheet.price[index_of(Marketspace::kODM)] = Money::from_micros(draw(rng, 1'000, 2'000'000));
    }
    const Hours yr1 = draw(rng, 3, 60);
    sheet.period[index_of(Marketspace::kH6SM)] = draw(rng, 2, 8);
    sheet.period[index_of(Marketspace::kYR1M)] = yr1;
    sheet.period[index_of(Marketspace::kYR3M)] = draw(rng, yr1 + 1, 3 * yr1);
    // Reservation fees: an hourly-equivalent draw times the term.
    for (const Marketspace m : {Marketspace::kYR1M, Marketspace::kYR3M}) {
      if (sheet.has(m)) sheet.price[index_of(m)] = Money::from_micros(sheet.at(m).micros() * sheet.period_of(m) * draw(rng, 1, 3) / 4);
    }
    const Hours n = draw(rng, 1, 200);
    cases.push_back(ValidationCase{"r" + std::to_string(i), n, sheet, case_seed});
  }
  return cases;
}

}  // namespace cloudfolio
