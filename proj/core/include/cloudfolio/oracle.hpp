#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cloudfolio/optimizer.hpp"
#include "cloudfolio/plan.hpp"

namespace cloudfolio {

inline constexpr Hours kDefaultOracleCap = 2000;

// Minimum-cost plan over every interval chain the plan checker accepts.
// Runs in O(n * |M|^2) using per-marketspace sliding-window minima. Equal
// costs resolve to the lower marketspace, then to the later migration hour
// (earlier intervals run as long as possible).
// Throws kHorizonTooLarge above `cap`, kInfeasible when no chain reaches n.
Plan dp_optimal(Hours n, const PriceSheet& sheet, Hours cap = kDefaultOracleCap);
Plan dp_optimal(Hours n, const InstanceType& instance, const Catalog& catalog, const CostModel& model,
                Hours cap = kDefaultOracleCap);

// Same recurrence evaluated by direct enumeration of every predecessor.
// O(n^2 * |M|^2); kept as an independent reference for the fast version.
Money dp_optimal_cost_quadratic(Hours n, const PriceSheet& sheet, Hours cap = kDefaultOracleCap);

struct ValidationCase {
  std::string case_id;
  Hours n = 1;
  PriceSheet sheet;
  std::uint64_t seed = 0;
};

struct CaseResult {
  std::string case_id;
  Hours n = 0;
  Money greedy_cost;
  Money dp_cost;
  double gap = 0.0;  // (greedy - dp) / dp; infinity when dp is 0 and greedy is not
  std::uint64_t seed = 0;
  Plan greedy_plan;
  Plan dp_plan;
};

struct MismatchReport {
  std::size_t cases = 0;
  std::vector<CaseResult> mismatches;  // gap above the threshold
  // Filled only when a plan failed a structural check or the oracle was beaten.
  std::vector<std::string> violations;
};

MismatchReport validate_greedy(std::span<const ValidationCase> cases, const GreedyOptions& options = {},
                               Hours cap = kDefaultOracleCap, double gap_threshold = 1e-9);

// Synthetic catalogs whose price ordering follows the observed market: spot
// cheapest per hour, reservations cheapest amortized, on-demand most
// expensive; 256 catalogs x penalties {0, 100, 500, 1000} x n in
// {1..48, 100, 500, 2000}. Real contract periods.
std::vector<ValidationCase> structured_suite(std::uint64_t seed = 20190801);

// Unordered random prices, random marketspace subsets (always including an
// unbounded one) and contract periods scaled down so reservations bind
// within the oracle cap.
std::vector<ValidationCase> random_suite(std::size_t count, std::uint64_t seed);

}  // namespace cloudfolio
