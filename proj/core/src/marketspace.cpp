#include "cloudfolio/marketspace.hpp"

#include <algorithm>
#include <cctype>
#include <string>

namespace cloudfolio {

std::string_view symbol(Marketspace m) {
  switch (m) {
    case Marketspace::kSM: return "SM";
    case Marketspace::kH1SM: return "1HSM";
    case Marketspace::kH6SM: return "6HSM";
    case Marketspace::kODM: return "ODM";
    case Marketspace::kYR1M: return "1YRM";
    case Marketspace::kYR3M: return "3YRM";
  }
  return "?";
}

std::optional<Marketspace> parse_marketspace(std::string_view text) {
  std::string upper(text);
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  if (upper == "SM") return Marketspace::kSM;
  if (upper == "ODM") return Marketspace::kODM;
  if (upper == "1HSM" || upper == "H1SM") return Marketspace::kH1SM;
  if (upper == "6HSM" || upper == "H6SM") return Marketspace::kH6SM;
  if (upper == "1YRM" || upper == "YR1M") return Marketspace::kYR1M;
  if (upper == "3YRM" || upper == "YR3M") return Marketspace::kYR3M;
  return std::nullopt;
}

}  // namespace cloudfolio
