#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rational.hpp"

namespace wfalab {

// Continuous piecewise-linear function of one real variable, total on the
// line and affine outside its knot range. Knots are strictly increasing and
// every knot is a genuine slope change, so two functions are equal exactly
// when their representations are equal.
class PiecewiseLinear {
 public:
  struct Knot {
    Rational x;
    Rational y;
    friend bool operator==(const Knot&, const Knot&) = default;
  };

  // f(s) = value_at_zero + slope * s
  static PiecewiseLinear affine(Rational value_at_zero, Rational slope);
  // f(s) = offset + slope * |s - apex|
  static PiecewiseLinear cone(const Rational& apex, const Rational& offset,
                              const Rational& slope);
  // Builds from arbitrary knots (sorted, distinct x) and tail slopes;
  // redundant knots are dropped.
  static PiecewiseLinear from_knots(std::vector<Knot> knots,
                                    Rational left_slope, Rational right_slope);

  Rational operator()(const Rational& s) const;

  const std::vector<Knot>& knots() const noexcept { return knots_; }
  const Rational& left_slope() const noexcept { return left_; }
  const Rational& right_slope() const noexcept { return right_; }

  std::string str() const;

  friend bool operator==(const PiecewiseLinear&, const PiecewiseLinear&) = default;
  friend PiecewiseLinear operator-(const PiecewiseLinear& f, const PiecewiseLinear& g);

 private:
  void canonicalize();

  std::vector<Knot> knots_;
  Rational left_;
  Rational right_;
  Rational intercept_;  // value at 0; only used when knots_ is empty
};

struct Cone {
  Rational position;
  Rational offset;
  Rational slope;
};

struct Interval {
  std::optional<Rational> lo;
  std::optional<Rational> hi;

  static Interval whole() { return {}; }
  static Interval closed(Rational a, Rational b) { return {std::move(a), std::move(b)}; }
  bool contains(const Rational& s) const { return (!lo || *lo <= s) && (!hi || s <= *hi); }
};

struct MaxResult {
  Rational value;
  Rational argmax;
};

Rational evaluate(const PiecewiseLinear& f, const Rational& s);

// s -> min over cones of offset + slope * |s - position|. Requires a
// nonempty list and positive slopes.
PiecewiseLinear cone_envelope(std::span<const Cone> cones);

PiecewiseLinear pointwise_min(const PiecewiseLinear& f, const PiecewiseLinear& g);

// Exact maximum of f - g over the domain with the smallest maximizing point.
// When the maximum is only approached along a flat unbounded tail the
// outermost knot is reported; a constant difference on the whole line
// reports 0. Throws Error(kUnbounded) when f - g grows without bound.
MaxResult max_difference(const PiecewiseLinear& f, const PiecewiseLinear& g,
                         const Interval& domain);

}  // namespace wfalab
