#pragma once

#include <cstddef>
#include <cstdint>
#include <map>

#include "problem.hpp"

namespace wfalab {

// Exhaustive path enumeration, independent of the work-function engine.
// Serve points range over grid coordinates of the prefix (whole spaces for
// finite components), so this certifies the engine against the same
// finiteness argument rather than against a continuous optimizer.

struct OracleLimits {
  std::size_t max_requests = 6;
  std::uint64_t max_paths = 5'000'000;
};

// Cheapest cost of serving the first i requests and ending at each possible
// last serve point. For i = 0 the only endpoint is the origin at cost 0.
std::map<ProductPoint, Rational> brute_force_endpoints(const Instance& instance, std::size_t i,
                                                       const OracleLimits& limits = {});

// Length of the shortest path from the origin that serves the first i
// requests in order and ends at s. Throws Error(kGuard) past the limits.
Rational brute_force_work_value(const Instance& instance, std::size_t i, const ProductPoint& s,
                                const OracleLimits& limits = {});

// Cheapest cost of serving the whole sequence.
Rational brute_force_opt(const Instance& instance, const OracleLimits& limits = {});

}  // namespace wfalab
