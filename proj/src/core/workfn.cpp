#include "workfn.hpp"

#include <algorithm>

#include "error.hpp"
#include "pl1d.hpp"

namespace wfalab {

WorkFunction WorkFunction::initial(std::shared_ptr<const Instance> instance) {
  if (!instance) fail(ErrorCode::kInvalidArgument, "null instance");
  instance->validate();
  WorkFunction wf;
  wf.instance_ = std::move(instance);
  wf.grid_ = grid_after(*wf.instance_, 0);
  wf.values_ = {Rational(0)};
  wf.set_anchors();
  return wf;
}

WorkFunction WorkFunction::update(const RequestPoint& r) const {
  if (step_ >= instance_->requests.size()) {
    fail(ErrorCode::kInvalidArgument, "all " + std::to_string(step_) + " requests already served");
  }
  if (instance_->requests[step_] != r) {
    fail(ErrorCode::kInvalidArgument, "request " + r.str() + " is not request " +
                                          std::to_string(step_ + 1) + " of the instance (" +
                                          instance_->requests[step_].str() + ")");
  }
  return apply_request(r);
}

WorkFunction WorkFunction::apply_request(const RequestPoint& r) const {
  if (!instance_->space_x.contains(r.x) || !instance_->space_y.contains(r.y)) {
    fail(ErrorCode::kInvalidArgument, "request " + r.str() + " is not in the instance spaces");
  }
  WorkFunction next;
  next.instance_ = instance_;
  next.step_ = step_ + 1;
  next.grid_ = grid_.with(r);
  next.last_ = r;

  // W keeps its values on r; everywhere else it is the cheapest walk from r.
  const auto on_r = grid_points_on(next.grid_, r);
  std::vector<Rational> on_r_values;
  on_r_values.reserve(on_r.size());
  for (const auto& t : on_r) on_r_values.push_back(evaluate(t));

  const auto& xs = next.grid_.xs;
  const auto& ys = next.grid_.ys;
  next.values_.reserve(xs.size() * ys.size());
  for (const auto& x : xs) {
    for (const auto& y : ys) {
      const ProductPoint g{x, y};
      Rational best = on_r_values[0] + distance(on_r[0], g);
      for (std::size_t k = 1; k < on_r.size(); ++k) {
        Rational v = on_r_values[k] + distance(on_r[k], g);
        if (v < best) best = std::move(v);
      }
      next.values_.push_back(std::move(best));
    }
  }
  next.set_anchors();
  return next;
}

RequestPoint WorkFunction::support_request() const {
  if (last_) return *last_;
  return {instance_->origin.x, instance_->origin.y};
}

std::size_t WorkFunction::x_index(const SpacePoint& x) const {
  auto it = std::lower_bound(grid_.xs.begin(), grid_.xs.end(), x);
  if (it == grid_.xs.end() || *it != x) fail(ErrorCode::kInvalidArgument, "x = " + x.str() + " is not a grid coordinate");
  return static_cast<std::size_t>(it - grid_.xs.begin());
}

std::size_t WorkFunction::y_index(const SpacePoint& y) const {
  auto it = std::lower_bound(grid_.ys.begin(), grid_.ys.end(), y);
  if (it == grid_.ys.end() || *it != y) fail(ErrorCode::kInvalidArgument, "y = " + y.str() + " is not a grid coordinate");
  return static_cast<std::size_t>(it - grid_.ys.begin());
}

const Rational& WorkFunction::value(const ProductPoint& g) const {
  return values_[x_index(g.x) * grid_.ys.size() + y_index(g.y)];
}

void WorkFunction::set_anchors() {
  anchors_ = step_ == 0 ? std::vector<ProductPoint>{instance_->origin}
                        : grid_points_on(grid_, *last_);
  anchor_values_.clear();
  anchor_values_.reserve(anchors_.size());
  for (const auto& a : anchors_) anchor_values_.push_back(value(a));
}

Rational WorkFunction::evaluate(const ProductPoint& s) const {
  Rational best = anchor_values_[0] + distance(anchors_[0], s);
  for (std::size_t k = 1; k < anchors_.size(); ++k) {
    Rational v = anchor_values_[k] + distance(anchors_[k], s);
    if (v < best) best = std::move(v);
  }
  return best;
}

std::vector<std::pair<ProductPoint, Rational>> WorkFunction::grid_values() const {
  std::vector<std::pair<ProductPoint, Rational>> out;
  out.reserve(values_.size());
  std::size_t k = 0;
  for (const auto& x : grid_.xs) {
    for (const auto& y : grid_.ys) out.emplace_back(ProductPoint{x, y}, values_[k++]);
  }
  return out;
}

Rational slack(const WorkFunction& wf, const ProductPoint& s, std::span<const ProductPoint> c,
               const SlackParam& param) {
  if (c.empty()) fail(ErrorCode::kInvalidArgument, "slack to an empty set");
  Rational best = wf.evaluate(c[0]) + param.value * wf.distance(c[0], s);
  for (std::size_t k = 1; k < c.size(); ++k) {
    Rational v = wf.evaluate(c[k]) + param.value * wf.distance(c[k], s);
    if (v < best) best = std::move(v);
  }
  return best - wf.evaluate(s);
}

Rational slack(const WorkFunction& wf, const ProductPoint& s, const RequestPoint& r,
               const SlackParam& param) {
  const auto& sx = wf.instance().space_x;
  const auto& sy = wf.instance().space_y;
  const Rational& p = param.value;
  // Walking from an anchor g to t on a request line and on to s costs at
  // least what the corner t = (r.x, g.y) or (g.x, r.y) costs, since p <= 1.
  const Rational via_x_line = p * sx.distance(r.x, s.x);
  const Rational via_y_line = p * sy.distance(r.y, s.y);
  std::optional<Rational> best;
  const auto& anchors = wf.anchors();
  for (std::size_t k = 0; k < anchors.size(); ++k) {
    const auto& g = anchors[k];
    const Rational a = sx.distance(g.x, r.x) + via_x_line + p * sy.distance(g.y, s.y);
    const Rational b = sy.distance(g.y, r.y) + via_y_line + p * sx.distance(g.x, s.x);
    Rational v = wf.anchor_values()[k] + wfalab::min(a, b);
    if (!best || v < *best) best = std::move(v);
  }
  return *best - wf.evaluate(s);
}

Rational slack_by_candidates(const WorkFunction& wf, const ProductPoint& s,
                             const RequestPoint& r, const SlackParam& param) {
  const Grid grid = wf.grid().with(r);
  auto cands = points_on(wf.instance(), grid, r, true);
  cands.push_back({r.x, s.y});
  cands.push_back({s.x, r.y});
  return slack(wf, s, std::span<const ProductPoint>(cands), param);
}

bool dominates(const WorkFunction& wf, const ProductPoint& t, const ProductPoint& s) {
  return wf.evaluate(s) == wf.evaluate(t) + wf.distance(s, t);
}

namespace {

struct LineBest {
  Rational value;
  ProductPoint point;
};

// Maximizes Sl(s; next) for s on one line of the support request. With
// vary_y the line is {x'} x Y, otherwise X x {y'}.
LineBest maximize_on_line(const WorkFunction& wf, const RequestPoint& support,
                          const RequestPoint& next, const Rational& lambda, bool vary_y) {
  const Instance& inst = wf.instance();
  const MetricSpace& fixed_space = vary_y ? inst.space_x : inst.space_y;
  const MetricSpace& var_space = vary_y ? inst.space_y : inst.space_x;
  const SpacePoint& fixed = vary_y ? support.x : support.y;
  const SpacePoint& next_fixed = vary_y ? next.x : next.y;
  const SpacePoint& next_var = vary_y ? next.y : next.x;
  auto fixed_of = [&](const ProductPoint& p) -> const SpacePoint& { return vary_y ? p.x : p.y; };
  auto var_of = [&](const ProductPoint& p) -> const SpacePoint& { return vary_y ? p.y : p.x; };
  auto make = [&](const SpacePoint& v) -> ProductPoint {
    return vary_y ? ProductPoint{fixed, v} : ProductPoint{v, fixed};
  };

  const auto& anchors = wf.anchors();
  const auto& values = wf.anchor_values();

  if (!var_space.line_like()) {
    std::optional<LineBest> best;
    const SlackParam param = SlackParam::lambda(lambda);
    for (const auto& v : var_space.points()) {
      const ProductPoint s = make(v);
      Rational val = slack(wf, s, next, param);
      if (!best || val > best->value) best = LineBest{std::move(val), s};
    }
    return *best;
  }

  const Rational w = var_space.scale();
  const Rational cross = lambda * fixed_space.distance(next_fixed, fixed);
  std::vector<Cone> served;
  std::vector<Cone> here;
  served.reserve(2 * anchors.size());
  here.reserve(anchors.size());
  for (std::size_t k = 0; k < anchors.size(); ++k) {
    const auto& g = anchors[k];
    // t on next's line parallel to this one, at g's varying coordinate
    served.push_back({var_of(g).value(), values[k] + fixed_space.distance(fixed_of(g), next_fixed) + cross,
                      lambda * w});
    // t on next's crossing line, at g's fixed coordinate
    served.push_back({next_var.value(),
                      values[k] + var_space.distance(var_of(g), next_var) +
                          lambda * fixed_space.distance(fixed_of(g), fixed),
                      lambda * w});
    here.push_back({var_of(g).value(), values[k] + fixed_space.distance(fixed_of(g), fixed), w});
  }
  const auto best = max_difference(cone_envelope(served), cone_envelope(here), Interval::whole());
  return {best.value, make(SpacePoint::real(best.argmax))};
}

}  // namespace

ExtendedCost extended_cost(const WorkFunction& wf, const RequestPoint& next, const Rational& lambda) {
  if (lambda.sign() <= 0 || lambda > 1) {
    fail(ErrorCode::kInvalidArgument, "extended cost needs 0 < lambda <= 1, got " + lambda.str());
  }
  const Instance& inst = wf.instance();
  if (!inst.space_x.contains(next.x) || !inst.space_y.contains(next.y)) {
    fail(ErrorCode::kInvalidArgument, "request " + next.str() + " is not in the instance spaces");
  }
  if (wf.step() == 0) {
    return {slack(wf, inst.origin, next, SlackParam::lambda(lambda)), inst.origin};
  }
  const RequestPoint support = wf.support_request();
  LineBest a = maximize_on_line(wf, support, next, lambda, true);
  LineBest b = maximize_on_line(wf, support, next, lambda, false);
  if (b.value > a.value || (b.value == a.value && b.point < a.point)) a = std::move(b);
  return {std::move(a.value), std::move(a.point)};
}

Rational opt_cost(const WorkFunction& wf) {
  // Every grid value is an anchor value plus a distance.
  const auto& v = wf.anchor_values();
  return *std::min_element(v.begin(), v.end());
}

}  // namespace wfalab
