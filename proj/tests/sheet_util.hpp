#pragma once

#include <initializer_list>
#include <random>
#include <utility>

#include "cloudfolio/plan.hpp"

namespace cloudfolio::testing {

inline Money usd(const char* text) { return *Money::parse(text); }

inline PriceSheet sheet_of(std::initializer_list<std::pair<Marketspace, const char*>> prices) {
  PriceSheet sheet;
  for (const auto& [m, text] : prices) sheet.price[index_of(m)] = usd(text);
  return sheet;
}

// Random sheet over a random subset of marketspaces (always one unbounded)
// with contract periods shrunk to fit small horizons.
inline PriceSheet random_small_sheet(std::mt19937_64& rng, std::size_t max_markets = 6) {
  PriceSheet sheet;
  std::vector<Marketspace> chosen = {rng() % 2 == 0 ? Marketspace::kSM : Marketspace::kODM};
  for (const auto m : kAllMarketspaces) {
    if (chosen.size() >= max_markets) break;
    if (m != chosen.front() && rng() % 2 == 0) chosen.push_back(m);
  }
  for (const auto m : chosen) {
    const std::int64_t hourly = 1 + static_cast<std::int64_t>(rng() % 100);
    sheet.price[index_of(m)] = Money::from_micros(hourly);
  }
  sheet.period[index_of(Marketspace::kH6SM)] = 2 + static_cast<Hours>(rng() % 5);
  sheet.period[index_of(Marketspace::kYR1M)] = 2 + static_cast<Hours>(rng() % 6);
  sheet.period[index_of(Marketspace::kYR3M)] = sheet.period[index_of(Marketspace::kYR1M)] + 1 + static_cast<Hours>(rng() % 8);
  for (const auto m : {Marketspace::kYR1M, Marketspace::kYR3M}) {
    if (sheet.has(m)) {
      sheet.price[index_of(m)] =
          Money::from_micros(sheet.at(m).micros() * sheet.period_of(m) * (1 + static_cast<std::int64_t>(rng() % 3)) / 2);
    }
  }
  return sheet;
}

}  // namespace cloudfolio::testing
