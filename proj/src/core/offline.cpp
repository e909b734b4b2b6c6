#include "offline.hpp"

#include <vector>

#include "error.hpp"

namespace wfalab {

std::map<ProductPoint, Rational> brute_force_endpoints(const Instance& instance, std::size_t i,
                                                       const OracleLimits& limits) {
  if (i > instance.requests.size()) {
    fail(ErrorCode::kInvalidArgument, "prefix length exceeds the sequence");
  }
  if (i > limits.max_requests) {
    fail(ErrorCode::kGuard, "oracle limited to " + std::to_string(limits.max_requests) +
                                " requests, asked for " + std::to_string(i));
  }
  const Grid grid = grid_after(instance, i);
  std::vector<std::vector<ProductPoint>> choices(i);
  std::uint64_t paths = 1;
  for (std::size_t k = 0; k < i; ++k) {
    choices[k] = points_on(instance, grid, instance.requests[k], true);
    paths *= choices[k].size();
    if (paths > limits.max_paths) {
      fail(ErrorCode::kGuard, "oracle would enumerate more than " +
                                  std::to_string(limits.max_paths) + " paths");
    }
  }

  std::map<ProductPoint, Rational> best;
  if (i == 0) {
    best.emplace(instance.origin, 0);
    return best;
  }
  // Depth-first over every choice sequence; only the endpoint is kept.
  std::vector<std::size_t> pick(i, 0);
  std::vector<Rational> cost(i + 1);
  std::size_t depth = 0;
  cost[0] = 0;
  const ProductPoint* prev = &instance.origin;
  std::vector<const ProductPoint*> at(i + 1, &instance.origin);
  while (true) {
    if (depth == i) {
      const ProductPoint& end = *at[i];
      auto [it, fresh] = best.emplace(end, cost[i]);
      if (!fresh && cost[i] < it->second) it->second = cost[i];
      // backtrack
      while (depth > 0 && ++pick[depth - 1] == choices[depth - 1].size()) {
        pick[depth - 1] = 0;
        --depth;
      }
      if (depth == 0) break;
      --depth;
    }
    prev = at[depth];
    const ProductPoint& p = choices[depth][pick[depth]];
    cost[depth + 1] = cost[depth] + instance.distance(*prev, p);
    at[depth + 1] = &p;
    ++depth;
  }
  return best;
}

Rational brute_force_work_value(const Instance& instance, std::size_t i, const ProductPoint& s,
                                const OracleLimits& limits) {
  const auto ends = brute_force_endpoints(instance, i, limits);
  std::optional<Rational> best;
  for (const auto& [p, c] : ends) {
    Rational v = c + instance.distance(p, s);
    if (!best || v < *best) best = std::move(v);
  }
  return *best;
}

Rational brute_force_opt(const Instance& instance, const OracleLimits& limits) {
  const auto ends = brute_force_endpoints(instance, instance.requests.size(), limits);
  std::optional<Rational> best;
  for (const auto& [p, c] : ends) {
    if (!best || c < *best) best = c;
  }
  return *best;
}

}  // namespace wfalab
