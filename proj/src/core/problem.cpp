#include "problem.hpp"

#include <algorithm>

#include "error.hpp"

namespace wfalab {
namespace {

void insert_sorted(std::vector<SpacePoint>& v, const SpacePoint& p) {
  auto it = std::lower_bound(v.begin(), v.end(), p);
  if (it == v.end() || *it != p) v.insert(it, p);
}

void sort_unique(std::vector<ProductPoint>& pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
}

}  // namespace

void Instance::validate() const {
  auto check = [&](const ProductPoint& p, const std::string& what) {
    if (!space_x.contains(p.x) || !space_y.contains(p.y)) {
      fail(ErrorCode::kInvalidArgument, what + " " + p.str() + " is not a point of " +
                                            space_x.describe() + " x " + space_y.describe());
    }
  };
  check(origin, "origin");
  for (std::size_t i = 0; i < requests.size(); ++i) {
    check(requests[i].corner(), "request " + std::to_string(i + 1));
  }
}

bool Grid::has_x(const SpacePoint& x) const { return std::binary_search(xs.begin(), xs.end(), x); }
bool Grid::has_y(const SpacePoint& y) const { return std::binary_search(ys.begin(), ys.end(), y); }

Grid Grid::with(const RequestPoint& r) const {
  Grid g = *this;
  insert_sorted(g.xs, r.x);
  insert_sorted(g.ys, r.y);
  return g;
}

bool serves(const ProductPoint& p, const RequestPoint& r) { return p.x == r.x || p.y == r.y; }

Grid grid_after(const Instance& instance, std::size_t i) {
  if (i > instance.requests.size()) {
    fail(ErrorCode::kInvalidArgument, "prefix length " + std::to_string(i) + " exceeds " +
                                          std::to_string(instance.requests.size()) + " requests");
  }
  Grid g{{instance.origin.x}, {instance.origin.y}};
  for (std::size_t k = 0; k < i; ++k) g = g.with(instance.requests[k]);
  return g;
}

std::vector<ProductPoint> grid_points_on(const Grid& grid, const RequestPoint& r) {
  std::vector<ProductPoint> pts;
  pts.reserve(grid.xs.size() + grid.ys.size());
  for (const auto& y : grid.ys) pts.push_back({r.x, y});
  for (const auto& x : grid.xs) pts.push_back({x, r.y});
  sort_unique(pts);
  return pts;
}

std::vector<SpacePoint> axis_candidates(const MetricSpace& space,
                                        const std::vector<SpacePoint>& grid_coords,
                                        bool full_finite) {
  if (full_finite && !space.line_like()) return space.points();
  return grid_coords;
}

std::vector<ProductPoint> points_on(const Instance& instance, const Grid& grid,
                                    const RequestPoint& r, bool full_finite) {
  std::vector<ProductPoint> pts;
  for (const auto& y : axis_candidates(instance.space_y, grid.ys, full_finite)) pts.push_back({r.x, y});
  for (const auto& x : axis_candidates(instance.space_x, grid.xs, full_finite)) pts.push_back({x, r.y});
  sort_unique(pts);
  return pts;
}

}  // namespace wfalab
