#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "error.hpp"
#include "offline.hpp"
#include "support.hpp"

using namespace wfatest;

TEST_CASE("empty prefix is the distance from the origin") {
  const auto inst = line_instance({{1, 2}});
  CHECK(brute_force_work_value(*inst, 0, P(3, -4)) == 7);
  const auto ends = brute_force_endpoints(*inst, 0);
  REQUIRE(ends.size() == 1);
  CHECK(ends.begin()->first == P(0, 0));
}

TEST_CASE("single request") {
  const auto inst = line_instance({{1, 2}});
  CHECK(brute_force_work_value(*inst, 1, P(1, 2)) == 3);
  CHECK(brute_force_work_value(*inst, 1, P(1, 0)) == 1);
  CHECK(brute_force_opt(*inst) == 1);
}

TEST_CASE("optimum") {
  CHECK(brute_force_opt(*line_instance({})) == 0);
  CHECK(brute_force_opt(*paper_example(3)) == 2);
  CHECK(brute_force_opt(*paper_example(6)) == 2);
}

TEST_CASE("guards") {
  CHECK_THROWS_AS(brute_force_opt(*paper_example(7)), Error);
  try {
    brute_force_opt(*paper_example(7));
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kGuard);
  }
  OracleLimits tight;
  tight.max_paths = 10;
  CHECK_THROWS_AS(brute_force_opt(*paper_example(4), tight), Error);
  CHECK_THROWS_AS(brute_force_work_value(*paper_example(3), 4, P(0, 0)), Error);
}

TEST_CASE("agreement with the engine on random instances") {
  std::mt19937_64 rng(77);
  for (int t = 0; t < 60; ++t) {
    const auto inst = random_instance(rng, t, 1 + rng() % 5, 4);
    const std::size_t n = inst->requests.size();
    const WorkFunction wf = advance_to(inst, n);
    const auto ends = brute_force_endpoints(*inst, n);
    CHECK(brute_force_opt(*inst) == opt_cost(wf));
    for (const auto& [g, v] : wf.grid_values()) CHECK(value_from_endpoints(*inst, ends, g) == v);
    for (int k = 0; k < 5; ++k) {
      const ProductPoint s = random_point(rng, *inst, 5);
      CHECK(brute_force_work_value(*inst, n, s) == wf.evaluate(s));
    }
  }
}
