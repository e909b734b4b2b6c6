#pragma once

#include <compare>
#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "rational.hpp"

namespace wfalab {

// A position in one metric space: a real coordinate for line spaces, a row
// index for matrix-defined spaces. Real positions order before indices.
class SpacePoint {
 public:
  SpacePoint() : v_(Rational{}) {}
  static SpacePoint real(Rational value) { return SpacePoint(std::move(value)); }
  static SpacePoint index(std::size_t i) { return SpacePoint(i); }

  bool is_real() const noexcept { return v_.index() == 0; }
  const Rational& value() const;
  std::size_t idx() const;

  std::string str() const;

  friend bool operator==(const SpacePoint&, const SpacePoint&) = default;
  friend std::strong_ordering operator<=>(const SpacePoint& a,
                                          const SpacePoint& b) noexcept {
    if (a.v_.index() != b.v_.index()) return a.v_.index() <=> b.v_.index();
    if (a.is_real()) return std::get<0>(a.v_) <=> std::get<0>(b.v_);
    return std::get<1>(a.v_) <=> std::get<1>(b.v_);
  }

 private:
  explicit SpacePoint(Rational v) : v_(std::move(v)) {}
  explicit SpacePoint(std::size_t i) : v_(i) {}

  std::variant<Rational, std::size_t> v_;
};

// A point of the product space X x Y. Ordered lexicographically on (x, y).
struct ProductPoint {
  SpacePoint x;
  SpacePoint y;

  std::string str() const { return "(" + x.str() + "," + y.str() + ")"; }

  friend bool operator==(const ProductPoint&, const ProductPoint&) = default;
  friend std::strong_ordering operator<=>(const ProductPoint& a,
                                          const ProductPoint& b) noexcept {
    if (auto c = a.x <=> b.x; c != 0) return c;
    return a.y <=> b.y;
  }
};

inline ProductPoint real_point(Rational x, Rational y) {
  return {SpacePoint::real(std::move(x)), SpacePoint::real(std::move(y))};
}

using DistanceTable = std::vector<std::vector<Rational>>;

// Checks the metric axioms on a square table. Returns a description of the
// first violation found ("asymmetry at (i,j)", "triangle at (i,j,k)", ...),
// or nothing when the table is a metric. A non-square table is an error.
std::optional<std::string> validate_finite_metric(const DistanceTable& dist);

// Immutable descriptor of one of the supported metric spaces: the real line,
// a finite space given by a distance table, or a positive rescaling of either.
class MetricSpace {
 public:
  enum class Kind { kRealLine, kFiniteMatrix, kScaled };

  static MetricSpace real_line();
  // Throws when the table violates the metric axioms.
  static MetricSpace finite_matrix(DistanceTable dist);
  // Every pair of distinct points at distance 1.
  static MetricSpace uniform(std::size_t size);
  static MetricSpace scaled(const MetricSpace& base, Rational weight);

  Kind kind() const noexcept { return node_->kind; }
  // Scaled only.
  const MetricSpace& base() const;
  const Rational& weight() const;
  // FiniteMatrix only.
  const DistanceTable& table() const;

  // True when positions are real coordinates (RealLine, possibly scaled).
  bool line_like() const noexcept { return line_; }
  // Product of all scaling weights on the way down to the base space.
  const Rational& scale() const noexcept { return scale_; }
  // Number of points of a finite space (after unwrapping scalings).
  std::size_t size() const;
  // All points of a finite space in index order.
  std::vector<SpacePoint> points() const;

  bool contains(const SpacePoint& p) const noexcept;
  Rational distance(const SpacePoint& a, const SpacePoint& b) const;

  std::string describe() const;

 private:
  struct Node {
    Kind kind;
    Rational weight;
    std::shared_ptr<const DistanceTable> table;
    std::shared_ptr<const MetricSpace> base;
  };

  explicit MetricSpace(std::shared_ptr<const Node> node);

  std::shared_ptr<const Node> node_;
  bool line_ = true;
  Rational scale_{1};
  const DistanceTable* table_ = nullptr;  // owned through node_
};

Rational distance(const MetricSpace& space, const SpacePoint& a,
                  const SpacePoint& b);

// d((x1,y1),(x2,y2)) = d^X(x1,x2) + d^Y(y1,y2)
Rational product_distance(const MetricSpace& x_space,
                          const MetricSpace& y_space, const ProductPoint& p,
                          const ProductPoint& q);

}  // namespace wfalab
