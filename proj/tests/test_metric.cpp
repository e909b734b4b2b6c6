#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "error.hpp"
#include "support.hpp"

using namespace wfatest;

TEST_CASE("line distances") {
  const auto line = MetricSpace::real_line();
  CHECK(line.distance(R(3), R(3)) == 0);
  CHECK(line.distance(R(1), R(3)) == 2);
  CHECK(distance(line, R(-1, 2), R(3, 4)) == Rational(5, 4));
  const auto weighted = MetricSpace::scaled(line, 2);
  CHECK(weighted.distance(R(3), R(5)) == 4);
  CHECK(weighted.line_like());
  CHECK(weighted.scale() == 2);
  CHECK(MetricSpace::scaled(weighted, Rational(1, 4)).scale() == Rational(1, 2));
}

TEST_CASE("product distance") {
  const auto line = MetricSpace::real_line();
  CHECK(product_distance(line, line, P(0, 0), P(0, 0)) == 0);
  CHECK(product_distance(line, line, P(0, 0), P(1, 2)) == 3);
  const auto u3 = MetricSpace::uniform(3);
  const ProductPoint p{SpacePoint::index(0), R(5)}, q{SpacePoint::index(2), R(5)};
  CHECK(product_distance(u3, line, p, q) == 1);
  CHECK(product_distance(u3, line, p, p) == 0);
}

TEST_CASE("mismatched points are rejected") {
  const auto line = MetricSpace::real_line();
  const auto u3 = MetricSpace::uniform(3);
  CHECK_THROWS_AS(line.distance(SpacePoint::index(0), R(1)), Error);
  CHECK_THROWS_AS(u3.distance(R(0), SpacePoint::index(1)), Error);
  CHECK_THROWS_AS(u3.distance(SpacePoint::index(0), SpacePoint::index(3)), Error);
  CHECK_FALSE(u3.contains(SpacePoint::index(3)));
  CHECK(u3.contains(SpacePoint::index(2)));
  CHECK_FALSE(line.contains(SpacePoint::index(0)));
}

TEST_CASE("finite metric validation") {
  CHECK_FALSE(validate_finite_metric({{0, 1}, {1, 0}}).has_value());
  const auto asym = validate_finite_metric({{0, 1}, {2, 0}});
  REQUIRE(asym.has_value());
  CHECK(asym->find("asymmetry at (0,1)") != std::string::npos);
  const auto tri = validate_finite_metric({{0, 1, 5}, {1, 0, 1}, {5, 1, 0}});
  REQUIRE(tri.has_value());
  CHECK(tri->find("triangle at (0,1,2)") != std::string::npos);
  CHECK(validate_finite_metric({{0, -1}, {-1, 0}}).has_value());
  CHECK(validate_finite_metric({{1, 1}, {1, 0}}).has_value());
  CHECK_THROWS_AS(validate_finite_metric({{0, 1}, {1}}), Error);
  CHECK_THROWS_AS(MetricSpace::finite_matrix({{0, 1, 5}, {1, 0, 1}, {5, 1, 0}}), Error);
}

TEST_CASE("finite spaces") {
  const auto m = MetricSpace::finite_matrix({{0, 2, 3}, {2, 0, 1}, {3, 1, 0}});
  CHECK(m.kind() == MetricSpace::Kind::kFiniteMatrix);
  CHECK(m.size() == 3);
  CHECK(m.points().size() == 3);
  CHECK(m.distance(SpacePoint::index(0), SpacePoint::index(2)) == 3);
  const auto s = MetricSpace::scaled(m, Rational(1, 2));
  CHECK_FALSE(s.line_like());
  CHECK(s.size() == 3);
  CHECK(s.distance(SpacePoint::index(0), SpacePoint::index(2)) == Rational(3, 2));
  CHECK_THROWS_AS(MetricSpace::scaled(m, 0), Error);
}

TEST_CASE("point ordering puts reals before indices") {
  CHECK(R(100) < SpacePoint::index(0));
  CHECK(R(-1) < R(0));
  CHECK(SpacePoint::index(1) < SpacePoint::index(2));
  CHECK(P(0, 5) < P(1, 0));
  CHECK(P(1, 0) < P(1, 2));
}

TEST_CASE("product distance vanishes only on equal points") {
  const auto line = MetricSpace::real_line();
  std::mt19937_64 rng(3);
  Instance inst;
  for (int k = 0; k < 200; ++k) {
    const auto p = random_point(rng, inst, 2), q = random_point(rng, inst, 2);
    CHECK((product_distance(line, line, p, q) == 0) == (p == q));
  }
}
