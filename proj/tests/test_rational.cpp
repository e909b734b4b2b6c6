#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <limits>

#include "error.hpp"
#include "rational.hpp"

using wfalab::ErrorCode;
using wfalab::Rational;

static ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const wfalab::Error& e) {
    return e.code();
  }
  return ErrorCode::kInternal;
}

TEST_CASE("normal form") {
  CHECK(Rational(2, 4) == Rational(1, 2));
  CHECK(Rational(3, -6) == Rational(-1, 2));
  CHECK(Rational(-3, -6).den() == 2);
  CHECK(Rational(0, 5) == Rational(0));
  CHECK(Rational(0, -5).den() == 1);
  CHECK(code_of([] { Rational(1, 0); }) == ErrorCode::kDomain);
}

TEST_CASE("parse") {
  CHECK(Rational::parse("7") == Rational(7));
  CHECK(Rational::parse("-3/4") == Rational(-3, 4));
  CHECK(Rational::parse("6/8") == Rational(3, 4));
  CHECK(Rational::parse("-2.25") == Rational(-9, 4));
  CHECK(Rational::parse("0.5") == Rational(1, 2));
  CHECK(Rational::parse(".5") == Rational(1, 2));
  CHECK(code_of([] { Rational::parse("abc"); }) == ErrorCode::kParse);
  CHECK(code_of([] { Rational::parse("1/0"); }) == ErrorCode::kDomain);
  CHECK(code_of([] { Rational::parse(""); }) == ErrorCode::kParse);
  CHECK(code_of([] { Rational::parse("99999999999999999999999"); }) == ErrorCode::kOverflow);
}

TEST_CASE("str round trip") {
  for (auto r : {Rational(0), Rational(5), Rational(-7, 3), Rational(1, 1024)}) {
    CHECK(Rational::parse(r.str()) == r);
  }
  CHECK(Rational(-7, 3).str() == "-7/3");
  CHECK(Rational(4).str() == "4");
}

TEST_CASE("arithmetic") {
  const Rational a(1, 3), b(1, 6);
  CHECK(a + b == Rational(1, 2));
  CHECK(a - b == Rational(1, 6));
  CHECK(a * b == Rational(1, 18));
  CHECK(a / b == Rational(2));
  CHECK(-a == Rational(-1, 3));
  CHECK(Rational(-5, 2).abs() == Rational(5, 2));
  CHECK(code_of([&] { (void)(a / Rational(0)); }) == ErrorCode::kDomain);
}

TEST_CASE("ordering") {
  CHECK(Rational(1, 3) < Rational(1, 2));
  CHECK(Rational(-1, 2) < Rational(-1, 3));
  CHECK(Rational(2, 4) <= Rational(1, 2));
  CHECK(wfalab::min(Rational(3), Rational(2)) == Rational(2));
  CHECK(wfalab::max(Rational(3), Rational(2)) == Rational(3));
}

TEST_CASE("ceil") {
  CHECK(wfalab::ceil(Rational(7, 2)) == 4);
  CHECK(wfalab::ceil(Rational(-7, 2)) == -3);
  CHECK(wfalab::ceil(Rational(3)) == 3);
}

TEST_CASE("overflow is reported, not wrapped") {
  const Rational big(std::numeric_limits<std::int64_t>::max() / 2);
  CHECK(code_of([&] { (void)(big * Rational(4)); }) == ErrorCode::kOverflow);
  CHECK(code_of([&] { (void)(big + big + big); }) == ErrorCode::kOverflow);
  // large intermediates that reduce back into range are fine
  const Rational p(1, 3037000499);
  CHECK(p * Rational(3037000499) == Rational(1));
}
