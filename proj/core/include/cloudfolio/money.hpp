#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace cloudfolio {

// Exact amount of US dollars stored as an integer number of micro-dollars.
// All catalog prices, fees and plan costs use this type so that cost
// comparisons (and therefore tie-breaking) are exact.
class Money {
 public:
  constexpr Money() = default;

  static constexpr Money from_micros(std::int64_t micros) { return Money(micros); }

  // Parses a plain decimal string ("0.0116", "850", "-1.5"). At most six
  // fractional digits are accepted; anything else yields nullopt.
  static std::optional<Money> parse(std::string_view text);

  constexpr std::int64_t micros() const { return micros_; }
  constexpr double usd() const { return static_cast<double>(micros_) / 1e6; }

  constexpr Money& operator+=(Money other) {
    micros_ += other.micros_;
    return *this;
  }
  constexpr Money& operator-=(Money other) {
    micros_ -= other.micros_;
    return *this;
  }

  friend constexpr Money operator+(Money a, Money b) { return Money(a.micros_ + b.micros_); }
  friend constexpr Money operator-(Money a, Money b) { return Money(a.micros_ - b.micros_); }
  friend constexpr Money operator*(Money a, std::int64_t k) { return Money(a.micros_ * k); }
  friend constexpr Money operator*(std::int64_t k, Money a) { return Money(a.micros_ * k); }
  friend constexpr auto operator<=>(Money, Money) = default;

 private:
  constexpr explicit Money(std::int64_t micros) : micros_(micros) {}

  std::int64_t micros_ = 0;
};

// "0.119444" style rendering with exactly six fractional digits.
std::string format_usd(Money amount);

// Fixed-point rendering of a real with `digits` fractional digits and '.' as
// the decimal separator, independent of the global locale.
std::string format_fixed(double value, int digits = 6);

// Dollars per VM-hour for `total` spread over `hours` (hours may already be
// multiplied by a VM count). Single correctly-rounded division of exact values.
double usd_per_hour(Money total, std::int64_t hours);

}  // namespace cloudfolio
