#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "problem.hpp"

namespace wfalab {

// Multiplier on the distance term of a slack. The work function algorithm's
// own parameter is the lambda kind; the general-space potential also uses a
// second, larger mu for the pair term.
struct SlackParam {
  enum class Kind { kLambda, kMu };
  Kind kind = Kind::kLambda;
  Rational value;

  static SlackParam lambda(Rational v) { return {Kind::kLambda, std::move(v)}; }
  static SlackParam mu(Rational v) { return {Kind::kMu, std::move(v)}; }
};

// Snapshot of W after a prefix of the request sequence. Values are stored on
// the coordinate grid; anywhere else W is the cheapest way to walk there from
// an anchor (a grid point on the last request, or the origin before any
// request). Snapshots are immutable; update returns a new one.
class WorkFunction {
 public:
  static WorkFunction initial(std::shared_ptr<const Instance> instance);

  // Serves the next request of the instance. Throws when r is not it.
  WorkFunction update(const RequestPoint& r) const;
  // Serves an arbitrary request, ignoring the instance's sequence. Used to
  // probe how quantities react to a perturbed request.
  WorkFunction apply_request(const RequestPoint& r) const;

  const Instance& instance() const noexcept { return *instance_; }
  const std::shared_ptr<const Instance>& instance_ptr() const noexcept { return instance_; }
  std::size_t step() const noexcept { return step_; }
  const Grid& grid() const noexcept { return grid_; }
  const std::optional<RequestPoint>& last_request() const noexcept { return last_; }
  // The last request, or a request at the origin before the first one. Its
  // two lines contain every undominated point.
  RequestPoint support_request() const;

  // Stored value at a grid point; throws for points off the grid.
  const Rational& value(const ProductPoint& g) const;
  Rational evaluate(const ProductPoint& s) const;

  const std::vector<ProductPoint>& anchors() const noexcept { return anchors_; }
  const std::vector<Rational>& anchor_values() const noexcept { return anchor_values_; }

  // All grid points with their values in lexicographic order.
  std::vector<std::pair<ProductPoint, Rational>> grid_values() const;

  Rational distance(const ProductPoint& p, const ProductPoint& q) const {
    return instance_->distance(p, q);
  }

 private:
  WorkFunction() = default;
  std::size_t x_index(const SpacePoint& x) const;
  std::size_t y_index(const SpacePoint& y) const;
  void set_anchors();

  std::shared_ptr<const Instance> instance_;
  std::size_t step_ = 0;
  Grid grid_;
  std::vector<Rational> values_;  // row-major, x outer
  std::optional<RequestPoint> last_;
  std::vector<ProductPoint> anchors_;
  std::vector<Rational> anchor_values_;
};

// min over t in C of W(t) + p*d(t, s), minus W(s). C must be nonempty.
Rational slack(const WorkFunction& wf, const ProductPoint& s, std::span<const ProductPoint> c,
               const SlackParam& param);
// Slack to the whole (infinite) request set r, exact for any metric.
Rational slack(const WorkFunction& wf, const ProductPoint& s, const RequestPoint& r,
               const SlackParam& param);
// Same quantity by minimizing over an explicit candidate set: grid points on
// both request lines, the projections of s onto them, and whole lines of
// finite components. Kept as an independent cross-check.
Rational slack_by_candidates(const WorkFunction& wf, const ProductPoint& s,
                             const RequestPoint& r, const SlackParam& param);

// W(s) = W(t) + d(s, t).
bool dominates(const WorkFunction& wf, const ProductPoint& t, const ProductPoint& s);

struct ExtendedCost {
  Rational value;
  ProductPoint witness;
};

// max over all s of Sl(s; next) with respect to wf, with the smallest
// maximizing point. The maximum sits on the lines of the support request,
// where it is found exactly (piecewise-linear maximization on line
// components, enumeration on finite ones).
ExtendedCost extended_cost(const WorkFunction& wf, const RequestPoint& next, const Rational& lambda);

// Cost of the cheapest way to serve the prefix: the least value on the grid.
Rational opt_cost(const WorkFunction& wf);

}  // namespace wfalab
