#include "metric.hpp"

#include "error.hpp"

namespace wfalab {

const Rational& SpacePoint::value() const {
  if (!is_real()) fail(ErrorCode::kInvalidArgument, "index point has no real value");
  return std::get<0>(v_);
}

std::size_t SpacePoint::idx() const {
  if (is_real()) fail(ErrorCode::kInvalidArgument, "real point has no index");
  return std::get<1>(v_);
}

std::string SpacePoint::str() const {
  if (is_real()) return std::get<0>(v_).str();
  return "#" + std::to_string(std::get<1>(v_));
}

std::optional<std::string> validate_finite_metric(const DistanceTable& dist) {
  const std::size_t n = dist.size();
  for (const auto& row : dist) {
    if (row.size() != n) {
      fail(ErrorCode::kInvalidArgument, "distance table is not square");
    }
  }
  auto pair = [](std::size_t i, std::size_t j) {
    return "(" + std::to_string(i) + "," + std::to_string(j) + ")";
  };
  for (std::size_t i = 0; i < n; ++i) {
    if (!dist[i][i].is_zero()) return "nonzero diagonal at " + pair(i, i);
    for (std::size_t j = 0; j < n; ++j) {
      if (dist[i][j].sign() < 0) return "negative distance at " + pair(i, j);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (dist[i][j] != dist[j][i]) return "asymmetry at " + pair(i, j);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) {
        if (dist[i][k] > dist[i][j] + dist[j][k]) {
          return "triangle at (" + std::to_string(i) + "," + std::to_string(j) +
                 "," + std::to_string(k) + ")";
        }
      }
    }
  }
  return std::nullopt;
}

MetricSpace::MetricSpace(std::shared_ptr<const Node> node) : node_(std::move(node)) {
  switch (node_->kind) {
    case Kind::kRealLine:
      line_ = true;
      scale_ = 1;
      break;
    case Kind::kFiniteMatrix:
      line_ = false;
      scale_ = 1;
      table_ = node_->table.get();
      break;
    case Kind::kScaled:
      line_ = node_->base->line_;
      scale_ = node_->base->scale_ * node_->weight;
      table_ = node_->base->table_;
      break;
  }
}

MetricSpace MetricSpace::real_line() {
  return MetricSpace(std::make_shared<const Node>(Node{Kind::kRealLine, 1, nullptr, nullptr}));
}

MetricSpace MetricSpace::finite_matrix(DistanceTable dist) {
  if (dist.empty()) fail(ErrorCode::kInvalidArgument, "finite metric needs at least one point");
  if (auto violation = validate_finite_metric(dist)) {
    fail(ErrorCode::kInvalidArgument, "not a metric: " + *violation);
  }
  auto table = std::make_shared<const DistanceTable>(std::move(dist));
  return MetricSpace(std::make_shared<const Node>(Node{Kind::kFiniteMatrix, 1, std::move(table), nullptr}));
}

MetricSpace MetricSpace::uniform(std::size_t size) {
  DistanceTable t(size, std::vector<Rational>(size, Rational(1)));
  for (std::size_t i = 0; i < size; ++i) t[i][i] = 0;
  return finite_matrix(std::move(t));
}

MetricSpace MetricSpace::scaled(const MetricSpace& base, Rational weight) {
  if (weight.sign() <= 0) fail(ErrorCode::kInvalidArgument, "scaling weight must be positive");
  return MetricSpace(std::make_shared<const Node>(
      Node{Kind::kScaled, std::move(weight), nullptr, std::make_shared<const MetricSpace>(base)}));
}

const MetricSpace& MetricSpace::base() const {
  if (kind() != Kind::kScaled) fail(ErrorCode::kInvalidArgument, "not a scaled space");
  return *node_->base;
}

const Rational& MetricSpace::weight() const {
  if (kind() != Kind::kScaled) fail(ErrorCode::kInvalidArgument, "not a scaled space");
  return node_->weight;
}

const DistanceTable& MetricSpace::table() const {
  if (kind() != Kind::kFiniteMatrix) fail(ErrorCode::kInvalidArgument, "not a matrix space");
  return *node_->table;
}

std::size_t MetricSpace::size() const {
  if (line_) fail(ErrorCode::kInvalidArgument, "line space has no finite size");
  return table_->size();
}

std::vector<SpacePoint> MetricSpace::points() const {
  std::vector<SpacePoint> pts;
  const std::size_t n = size();
  pts.reserve(n);
  for (std::size_t i = 0; i < n; ++i) pts.push_back(SpacePoint::index(i));
  return pts;
}

bool MetricSpace::contains(const SpacePoint& p) const noexcept {
  if (line_) return p.is_real();
  return !p.is_real() && p.idx() < table_->size();
}

Rational MetricSpace::distance(const SpacePoint& a, const SpacePoint& b) const {
  if (!contains(a) || !contains(b)) {
    fail(ErrorCode::kInvalidArgument,
         "point " + (contains(a) ? b : a).str() + " does not belong to space " + describe());
  }
  if (line_) {
    Rational d = (a.value() - b.value()).abs();
    if (scale_ == 1) return d;
    return d * scale_;
  }
  const Rational& d = (*table_)[a.idx()][b.idx()];
  if (scale_ == 1) return d;
  return d * scale_;
}

std::string MetricSpace::describe() const {
  switch (kind()) {
    case Kind::kRealLine: return "RealLine";
    case Kind::kFiniteMatrix: return "FiniteMatrix(" + std::to_string(table_->size()) + ")";
    case Kind::kScaled: return "Scaled(" + base().describe() + "," + weight().str() + ")";
  }
  return "?";
}

Rational distance(const MetricSpace& space, const SpacePoint& a, const SpacePoint& b) {
  return space.distance(a, b);
}

Rational product_distance(const MetricSpace& x_space, const MetricSpace& y_space,
                          const ProductPoint& p, const ProductPoint& q) {
  return x_space.distance(p.x, q.x) + y_space.distance(p.y, q.y);
}

}  // namespace wfalab
