#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "metric.hpp"

namespace wfalab {

// Request r(x, y): served by any point sharing x or sharing y.
struct RequestPoint {
  SpacePoint x;
  SpacePoint y;

  ProductPoint corner() const { return {x, y}; }
  std::string str() const { return "r(" + x.str() + "," + y.str() + ")"; }
  friend bool operator==(const RequestPoint&, const RequestPoint&) = default;
};

struct Instance {
  MetricSpace space_x = MetricSpace::real_line();
  MetricSpace space_y = MetricSpace::real_line();
  ProductPoint origin;
  std::vector<RequestPoint> requests;

  // Throws when the origin or a request does not live in the spaces.
  void validate() const;
  Rational distance(const ProductPoint& p, const ProductPoint& q) const {
    return product_distance(space_x, space_y, p, q);
  }
};

// Coordinates seen so far, each list sorted and duplicate-free.
struct Grid {
  std::vector<SpacePoint> xs;
  std::vector<SpacePoint> ys;

  bool has_x(const SpacePoint& x) const;
  bool has_y(const SpacePoint& y) const;
  // Adds the coordinates of r, keeping both lists sorted.
  Grid with(const RequestPoint& r) const;
  friend bool operator==(const Grid&, const Grid&) = default;
};

bool serves(const ProductPoint& p, const RequestPoint& r);

// Origin coordinates plus those of the first i requests.
Grid grid_after(const Instance& instance, std::size_t i);

// All (r.x, y) and (x, r.y) with y, x from the grid, sorted, deduplicated.
std::vector<ProductPoint> grid_points_on(const Grid& grid, const RequestPoint& r);

// Coordinates to try along one axis: the grid values, or every point of
// the space when it is finite and full_finite is set.
std::vector<SpacePoint> axis_candidates(const MetricSpace& space,
                                        const std::vector<SpacePoint>& grid_coords,
                                        bool full_finite);

// Like grid_points_on, but finite components contribute their whole space
// when full_finite is set.
std::vector<ProductPoint> points_on(const Instance& instance, const Grid& grid,
                                    const RequestPoint& r, bool full_finite);

}  // namespace wfalab
