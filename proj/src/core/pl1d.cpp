#include "pl1d.hpp"

#include <algorithm>

#include "error.hpp"

namespace wfalab {
namespace {

std::vector<Rational> merged_knot_xs(const PiecewiseLinear& f, const PiecewiseLinear& g) {
  std::vector<Rational> xs;
  xs.reserve(f.knots().size() + g.knots().size());
  for (const auto& k : f.knots()) xs.push_back(k.x);
  for (const auto& k : g.knots()) xs.push_back(k.x);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  return xs;
}

}  // namespace

PiecewiseLinear PiecewiseLinear::affine(Rational value_at_zero, Rational slope) {
  PiecewiseLinear f;
  f.intercept_ = std::move(value_at_zero);
  f.left_ = slope;
  f.right_ = std::move(slope);
  return f;
}

PiecewiseLinear PiecewiseLinear::cone(const Rational& apex, const Rational& offset,
                                      const Rational& slope) {
  return from_knots({{apex, offset}}, -slope, slope);
}

PiecewiseLinear PiecewiseLinear::from_knots(std::vector<Knot> knots, Rational left_slope,
                                            Rational right_slope) {
  for (std::size_t i = 1; i < knots.size(); ++i) {
    if (!(knots[i - 1].x < knots[i].x)) {
      fail(ErrorCode::kInvalidArgument, "knots must be strictly increasing");
    }
  }
  PiecewiseLinear f;
  f.knots_ = std::move(knots);
  f.left_ = std::move(left_slope);
  f.right_ = std::move(right_slope);
  f.canonicalize();
  return f;
}

void PiecewiseLinear::canonicalize() {
  if (knots_.empty()) {
    if (left_ != right_) fail(ErrorCode::kInternal, "affine function with two slopes");
    return;
  }
  std::vector<Knot> kept;
  kept.reserve(knots_.size());
  Rational incoming = left_;
  for (std::size_t i = 0; i < knots_.size(); ++i) {
    const Rational outgoing =
        i + 1 < knots_.size()
            ? (knots_[i + 1].y - knots_[i].y) / (knots_[i + 1].x - knots_[i].x)
            : right_;
    if (outgoing != incoming) kept.push_back(knots_[i]);
    incoming = outgoing;
  }
  if (kept.empty()) {
    intercept_ = knots_.front().y - left_ * knots_.front().x;
  } else {
    intercept_ = 0;
  }
  knots_ = std::move(kept);
}

Rational PiecewiseLinear::operator()(const Rational& s) const {
  if (knots_.empty()) return intercept_ + left_ * s;
  if (s <= knots_.front().x) return knots_.front().y + left_ * (s - knots_.front().x);
  if (s >= knots_.back().x) return knots_.back().y + right_ * (s - knots_.back().x);
  auto it = std::upper_bound(knots_.begin(), knots_.end(), s,
                             [](const Rational& v, const Knot& k) { return v < k.x; });
  const Knot& b = *it;
  const Knot& a = *(it - 1);
  return a.y + (b.y - a.y) * (s - a.x) / (b.x - a.x);
}

std::string PiecewiseLinear::str() const {
  std::string out = "PL[left " + left_.str();
  if (knots_.empty()) out += ", f(0)=" + intercept_.str();
  for (const auto& k : knots_) out += ", (" + k.x.str() + "," + k.y.str() + ")";
  out += ", right " + right_.str() + "]";
  return out;
}

PiecewiseLinear operator-(const PiecewiseLinear& f, const PiecewiseLinear& g) {
  const auto xs = merged_knot_xs(f, g);
  if (xs.empty()) {
    return PiecewiseLinear::affine(f(0) - g(0), f.left_slope() - g.left_slope());
  }
  std::vector<PiecewiseLinear::Knot> knots;
  knots.reserve(xs.size());
  for (const auto& x : xs) knots.push_back({x, f(x) - g(x)});
  return PiecewiseLinear::from_knots(std::move(knots), f.left_slope() - g.left_slope(),
                                     f.right_slope() - g.right_slope());
}

Rational evaluate(const PiecewiseLinear& f, const Rational& s) { return f(s); }

PiecewiseLinear pointwise_min(const PiecewiseLinear& f, const PiecewiseLinear& g) {
  std::vector<Rational> xs = merged_knot_xs(f, g);
  if (xs.empty()) {
    if (f.left_slope() == g.left_slope()) return f(0) <= g(0) ? f : g;
    // Two lines meet once.
    xs.push_back((g(0) - f(0)) / (f.left_slope() - g.left_slope()));
  }

  // Crossings strictly inside the knot range and on the two tails.
  std::vector<Rational> crossings;
  {
    const Rational d0 = f(xs.front()) - g(xs.front());
    const Rational tail = f.left_slope() - g.left_slope();
    if (!tail.is_zero() && !d0.is_zero()) {
      const Rational x = xs.front() - d0 / tail;
      if (x < xs.front()) crossings.push_back(x);
    }
  }
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    const Rational da = f(xs[i]) - g(xs[i]);
    const Rational db = f(xs[i + 1]) - g(xs[i + 1]);
    if (da.sign() * db.sign() < 0) {
      crossings.push_back(xs[i] + da / (da - db) * (xs[i + 1] - xs[i]));
    }
  }
  {
    const Rational dn = f(xs.back()) - g(xs.back());
    const Rational tail = f.right_slope() - g.right_slope();
    if (!tail.is_zero() && !dn.is_zero()) {
      const Rational x = xs.back() - dn / tail;
      if (x > xs.back()) crossings.push_back(x);
    }
  }
  xs.insert(xs.end(), crossings.begin(), crossings.end());
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  auto lower = [&](const Rational& s) { return wfalab::min(f(s), g(s)); };
  std::vector<PiecewiseLinear::Knot> knots;
  knots.reserve(xs.size());
  for (const auto& x : xs) knots.push_back({x, lower(x)});
  // Beyond the outermost points neither function crosses the other, so the
  // lower one on a unit step out is the lower one on the whole tail.
  const Rational left = knots.front().y - lower(xs.front() - 1);
  const Rational right = lower(xs.back() + 1) - knots.back().y;
  return PiecewiseLinear::from_knots(std::move(knots), left, right);
}

PiecewiseLinear cone_envelope(std::span<const Cone> cones) {
  if (cones.empty()) fail(ErrorCode::kInvalidArgument, "cone envelope of an empty anchor list");
  for (const auto& c : cones) {
    if (c.slope.sign() <= 0) fail(ErrorCode::kInvalidArgument, "cone slopes must be positive");
  }
  PiecewiseLinear env = PiecewiseLinear::cone(cones[0].position, cones[0].offset, cones[0].slope);
  for (std::size_t i = 1; i < cones.size(); ++i) {
    const Cone& c = cones[i];
    env = pointwise_min(env, PiecewiseLinear::cone(c.position, c.offset, c.slope));
  }
  return env;
}

MaxResult max_difference(const PiecewiseLinear& f, const PiecewiseLinear& g,
                         const Interval& domain) {
  if (domain.lo && domain.hi && *domain.hi < *domain.lo) {
    fail(ErrorCode::kInvalidArgument, "empty domain");
  }
  const PiecewiseLinear h = f - g;
  if (!domain.lo && h.left_slope().sign() < 0) {
    fail(ErrorCode::kUnbounded, "difference grows without bound towards -infinity");
  }
  if (!domain.hi && h.right_slope().sign() > 0) {
    fail(ErrorCode::kUnbounded, "difference grows without bound towards +infinity");
  }

  std::vector<Rational> candidates;
  if (domain.lo) candidates.push_back(*domain.lo);
  for (const auto& x : merged_knot_xs(f, g)) {
    if (domain.contains(x)) candidates.push_back(x);
  }
  if (domain.hi) candidates.push_back(*domain.hi);
  if (candidates.empty()) {
    if (h.knots().empty()) return {h(0), 0};
    // Domain is a half-line that misses every knot; h is affine on it and
    // bounded, hence constant.
    const Rational s = domain.lo ? *domain.lo : *domain.hi;
    return {h(s), s};
  }
  std::sort(candidates.begin(), candidates.end());
  MaxResult best{h(candidates.front()), candidates.front()};
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    Rational v = h(candidates[i]);
    if (v > best.value) best = {std::move(v), candidates[i]};
  }
  return best;
}

}  // namespace wfalab
