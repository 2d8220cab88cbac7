#include "cloudfolio/money.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>

namespace cloudfolio {

std::optional<Money> Money::parse(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) return std::nullopt;
  bool negative = false;
  if (text.front() == '-' || text.front() == '+') {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  const auto dot = text.find('.');
  const std::string_view whole = text.substr(0, dot);
  std::string_view frac = dot == std::string_view::npos ? std::string_view{} : text.substr(dot + 1);
  if (whole.empty() && frac.empty()) return std::nullopt;
  if (frac.size() > 6) return std::nullopt;

  std::int64_t units = 0;
  if (!whole.empty()) {
    auto [ptr, ec] = std::from_chars(whole.data(), whole.data() + whole.size(), units);
    if (ec != std::errc() || ptr != whole.data() + whole.size()) return std::nullopt;
  }
  std::int64_t micros_frac = 0;
  for (std::size_t i = 0; i < 6; ++i) {
    micros_frac *= 10;
    if (i < frac.size()) {
      const char c = frac[i];
      if (c < '0' || c > '9') return std::nullopt;
      micros_frac += c - '0';
    }
  }
  if (units > std::numeric_limits<std::int64_t>::max() / 1'000'000 - 1) return std::nullopt;
  const std::int64_t micros = units * 1'000'000 + micros_frac;
  return Money::from_micros(negative ? -micros : micros);
}

std::string format_usd(Money amount) {
  const std::int64_t m = amount.micros();
  const bool negative = m < 0;
  // Avoid overflow on INT64_MIN by working in unsigned space.
  const std::uint64_t mag = negative ? 0 - static_cast<std::uint64_t>(m) : static_cast<std::uint64_t>(m);
  char buf[48];
  std::snprintf(buf, sizeof buf, "%s%llu.%06llu", negative ? "-" : "",
                static_cast<unsigned long long>(mag / 1'000'000),
                static_cast<unsigned long long>(mag % 1'000'000));
  return buf;
}

std::string format_fixed(double value, int digits) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::fixed, digits);
  if (ec != std::errc()) return "nan";
  std::string out(buf, ptr);
  if (out.front() == '-' && out.find_first_not_of("-0.") == std::string::npos) out.erase(0, 1);
  return out;
}

double usd_per_hour(Money total, std::int64_t hours) {
  if (hours <= 0) return std::numeric_limits<double>::quiet_NaN();
  return static_cast<double>(total.micros()) / (static_cast<double>(hours) * 1e6);
}

}  // namespace cloudfolio
