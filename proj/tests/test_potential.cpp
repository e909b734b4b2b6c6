#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "error.hpp"
#include "support.hpp"

using namespace wfatest;

namespace {

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kInternal;
}

const Rational kHalf(1, 2);

}  // namespace

TEST_CASE("default constants") {
  const PotentialConfig c = default_constants(kHalf, PotentialVariant::kCnn);
  CHECK(c.alpha == Rational(1, 28));
  CHECK(c.c1 == Rational(1, 28));
  CHECK(c.c2 == Rational(1, 56));
  CHECK(c.c3 == Rational(1, 84));
  CHECK(c.c4 == 2 + Rational(4, 28) + Rational(1, 84) * Rational(3, 2));
  CHECK(c.gamma == c.c2 / (c.c2 + c.c4));
  CHECK(c.c5 == wfalab::min((1 - c.gamma) * c.c1, c.gamma * c.c3));
  CHECK_NOTHROW(validate(c));

  const PotentialConfig g = default_constants(kHalf, PotentialVariant::kGeneral);
  CHECK(g.mu == Rational(3, 4));
  CHECK(g.eta == 8);
  CHECK(g.eta * (g.mu - g.lambda) >= 1 + g.mu);
  CHECK(g.beta == Rational(1, 216));
  CHECK(g.bound_region_first().sign() > 0);
  CHECK_NOTHROW(validate(g));

  for (int k = 1; k < 16; ++k) {
    const Rational l(k, 16);
    const PotentialConfig a = default_constants(l, PotentialVariant::kCnn);
    CHECK(a.alpha < kHalf);
    CHECK(a.alpha < (1 - l) / (2 * (1 + l)));
    CHECK(a.c5.sign() > 0);
    const PotentialConfig b = default_constants(l, PotentialVariant::kGeneral);
    CHECK_NOTHROW(validate(b));
    CHECK(b.c5.sign() > 0);
  }
  CHECK(code_of([] { default_constants(1, PotentialVariant::kCnn); }) == ErrorCode::kInvalidArgument);
  CHECK(code_of([] { default_constants(0, PotentialVariant::kGeneral); }) == ErrorCode::kInvalidArgument);
}

TEST_CASE("constant validation") {
  CHECK_THROWS_AS(validate(make_cnn_config(kHalf, Rational(1, 10))), Error);  // alpha above the cap
  CHECK_THROWS_AS(validate(make_cnn_config(kHalf, Rational(1, 28), Rational(1, 2))), Error);  // gamma too large
  CHECK_NOTHROW(validate(make_cnn_config(kHalf, Rational(1, 40))));
  CHECK_THROWS_AS(validate(make_general_config(kHalf, Rational(3, 4), 6, Rational(1, 216))), Error);  // eta too small
  CHECK_THROWS_AS(validate(make_general_config(kHalf, Rational(1, 4), 8, Rational(1, 216))), Error);  // mu below lambda
  CHECK_THROWS_AS(validate(make_general_config(kHalf, Rational(3, 4), 8, Rational(1, 10))), Error);   // beta too large
}

TEST_CASE("variant selection") {
  const auto line = line_instance({{1, 2}});
  CHECK(auto_variant(*line) == PotentialVariant::kCnn);
  const auto fin = share(generate(GeneratorSpec::finite_uniform(4, 3), 1));
  CHECK(auto_variant(*fin) == PotentialVariant::kGeneral);
  const auto weighted = share(generate(GeneratorSpec::weighted_line(1, 3, 3, 4), 1));
  CHECK(auto_variant(*weighted) == PotentialVariant::kGeneral);
  const PotentialConfig cnn = default_constants(kHalf, PotentialVariant::kCnn);
  CHECK_NOTHROW(check_compatible(cnn, *weighted));
  CHECK(code_of([&] { check_compatible(cnn, *fin); }) == ErrorCode::kInvalidArgument);
  CHECK(code_of([&] { min_f(WorkFunction::initial(fin), cnn); }) == ErrorCode::kInvalidArgument);
  CHECK(code_of([&] { region_membership(*fin, Region::boks({SpacePoint::index(0), SpacePoint::index(0)},
                                                           {SpacePoint::index(1), SpacePoint::index(1)}),
                                        {SpacePoint::index(0), SpacePoint::index(0)}); }) ==
        ErrorCode::kInvalidArgument);
}

TEST_CASE("regions") {
  const auto inst = line_instance({});
  CHECK(region_membership(*inst, Region::boks(P(1, 1), P(1, 1)), P(1, 1)));
  CHECK_FALSE(region_membership(*inst, Region::boks(P(1, 1), P(1, 1)), P(1, 2)));
  const Region box = Region::boks(P(1, 1), P(4, 2));
  CHECK(region_membership(*inst, box, {R(2), R(3, 2)}));
  CHECK_FALSE(region_membership(*inst, box, {R(0), R(3, 2)}));
  CHECK(region_membership(*inst, Region::boks(P(4, 2), P(1, 1)), {R(2), R(3, 2)}));
  const Region dot = Region::spheres(P(1, 1), P(1, 1), 8);
  CHECK(region_membership(*inst, dot, P(1, 1)));
  CHECK_FALSE(region_membership(*inst, dot, {R(1), R(9, 8)}));
  const Region ball = Region::spheres(P(0, 0), P(1, 2), 2);
  CHECK(region_membership(*inst, ball, P(-2, 4)));
  CHECK_FALSE(region_membership(*inst, ball, P(-2, 5)));
  const auto fin = share(generate(GeneratorSpec::finite_uniform(4, 3), 1));
  const ProductPoint a{SpacePoint::index(0), SpacePoint::index(1)}, b{SpacePoint::index(2), SpacePoint::index(1)};
  // radius eta along X, zero along Y
  CHECK(region_membership(*fin, Region::spheres(a, b, 1), {SpacePoint::index(3), SpacePoint::index(1)}));
  CHECK_FALSE(region_membership(*fin, Region::spheres(a, b, 1), {SpacePoint::index(3), SpacePoint::index(0)}));
}

TEST_CASE("region slack against dense minimization") {
  std::mt19937_64 rng(12);
  const auto p = SlackParam::lambda(kHalf);
  for (int t = 0; t < 40; ++t) {
    const auto inst = share(generate(GeneratorSpec::uniform_random(3, 3), rng()));
    const WorkFunction wf = advance_to(inst, 3);
    const ProductPoint s1 = random_point(rng, *inst, 3), s2 = random_point(rng, *inst, 3);
    const ProductPoint s3 = random_point(rng, *inst, 4);
    const Region box = Region::boks(s1, s2);
    const Rational exact = region_slack(wf, s3, box, p);
    const Rational x0 = wfalab::min(s1.x.value(), s2.x.value()), x1 = wfalab::max(s1.x.value(), s2.x.value());
    const Rational y0 = wfalab::min(s1.y.value(), s2.y.value()), y1 = wfalab::max(s1.y.value(), s2.y.value());
    const Rational step(1, 16);
    std::optional<Rational> dense;
    for (Rational x = x0; x <= x1; x += step)
      for (Rational y = y0; y <= y1; y += step) {
        const ProductPoint u = real_point(x, y);
        Rational v = wf.evaluate(u) + kHalf * wf.distance(u, s3);
        if (!dense || v < *dense) dense = v;
      }
    const Rational d = *dense - wf.evaluate(s3);
    CHECK(exact <= d);
    CHECK(d - exact <= Rational(1, 32) * 3);
    // singleton region and containment
    const std::vector<ProductPoint> one{s1};
    CHECK(region_slack(wf, s3, Region::boks(s1, s1), p) == slack(wf, s3, one, p));
    if (region_membership(*inst, box, s3)) CHECK(exact <= 0);
  }
}

TEST_CASE("H, F and G") {
  const auto inst = line_instance({{2, 0}});
  const WorkFunction w0 = WorkFunction::initial(inst);
  const auto half = SlackParam::lambda(kHalf);
  CHECK(h_value(w0, P(0, 0), P(2, 0), half) == kHalf);
  const PotentialConfig cnn = default_constants(kHalf, PotentialVariant::kCnn);
  std::mt19937_64 rng(9);
  for (int t = 0; t < 30; ++t) {
    const auto r = share(generate(GeneratorSpec::uniform_random(4, 4), rng()));
    const WorkFunction wf = advance_to(r, 4);
    for (int k = 0; k < 20; ++k) {
      const auto a = random_point(rng, *r, 4), b = random_point(rng, *r, 4), c = random_point(rng, *r, 4);
      CHECK(h_value(wf, a, a, half) == wf.evaluate(a));
      CHECK(h_value(wf, a, b, half) == h_value(wf, b, a, half));
      CHECK(f_value(wf, a, a, a, cnn) == wf.evaluate(a));
      CHECK(g_value(wf, a, a, a, cnn) == wf.evaluate(a));
      const Rational f = f_value(wf, a, b, c, cnn);
      CHECK(f <= g_value(wf, a, b, c, cnn));
      const std::vector<ProductPoint> pair{a, b};
      CHECK(f == h_value(wf, a, b, half) - cnn.alpha * slack(wf, c, pair, half));
    }
  }
}

TEST_CASE("minimization over candidates") {
  const auto inst = line_instance({{1, 2}, {-1, 3}, {2, -2}});
  const PotentialConfig cnn = default_constants(kHalf, PotentialVariant::kCnn);
  const WorkFunction w0 = WorkFunction::initial(inst);
  const TripleMin m0 = min_f(w0, cnn);
  CHECK(m0.value == 0);
  CHECK(m0.triple == Triple{P(0, 0), P(0, 0), P(0, 0)});
  CHECK(phi(w0, cnn) == 0);
  for (std::size_t i = 1; i <= 3; ++i) {
    const WorkFunction wf = advance_to(inst, i);
    const PotentialSummary s = summarize(wf, cnn);
    CHECK(s.f.value <= s.g.value);
    CHECK(s.g.value <= s.h.value);
    for (const auto* t : {&s.f.triple, &s.g.triple}) {
      CHECK(serves(t->s1, inst->requests[i - 1]));
      CHECK(serves(t->s2, inst->requests[i - 1]));
      CHECK(serves(t->s3, inst->requests[i - 1]));
    }
    CHECK(f_value(wf, s.f.triple.s1, s.f.triple.s2, s.f.triple.s3, cnn) == s.f.value);
    CHECK(g_value(wf, s.g.triple.s1, s.g.triple.s2, s.g.triple.s3, cnn) == s.g.value);
    // brute force over the same candidates, F and G evaluated independently
    const auto cands = potential_candidates(wf);
    Rational bf = s.f.value, bg = s.g.value;
    for (const auto& a : cands)
      for (const auto& b : cands)
        for (const auto& c : cands) {
          bf = wfalab::min(bf, f_value(wf, a, b, c, cnn));
          bg = wfalab::min(bg, g_value(wf, a, b, c, cnn));
        }
    CHECK(bf == s.f.value);
    CHECK(bg == s.g.value);
    // with the G weight at zero the potential is min F
    PotentialConfig flat = cnn;
    flat.gamma = 0;
    CHECK(phi(wf, flat) == s.f.value);
    CHECK(summarize(wf, cnn, true).f.value >= s.f.value);
  }
}

TEST_CASE("triple cardinality") {
  CHECK(Triple{P(0, 0), P(0, 0), P(0, 0)}.cardinality() == 1);
  CHECK(Triple{P(0, 0), P(1, 0), P(0, 0)}.cardinality() == 2);
  CHECK(Triple{P(0, 0), P(1, 0), P(2, 0)}.cardinality() == 3);
}

TEST_CASE("verify_step on the path example") {
  const auto inst = paper_example(8);
  const PotentialConfig cnn = default_constants(kHalf, PotentialVariant::kCnn);
  WorkFunction wf = WorkFunction::initial(inst);
  for (const auto& r : inst->requests) {
    const WorkFunction next = wf.update(r);
    VerifyOptions opt;
    opt.audit = true;
    const LemmaReport rep = verify_step(wf, next, r, cnn, opt);
    for (const auto& c : rep.checks) {
      INFO(c.name << " " << c.lhs.str() << " " << c.relation << " " << c.rhs.str());
      CHECK((!c.applicable || c.holds));
    }
    CHECK(rep.failures() == 0);
    REQUIRE(rep.find("phi_increase") != nullptr);
    CHECK(rep.find("nabla_le_delta")->holds);
    if (wf.step() == 0) CHECK(rep.before.phi == 0);
    wf = next;
  }
}

TEST_CASE("verify_step on finite and weighted spaces") {
  std::mt19937_64 rng(44);
  for (int t = 0; t < 10; ++t) {
    const auto inst = random_instance(rng, 1 + t % 2, 6, 4);
    const PotentialConfig cfg = default_constants(Rational(1, 4) * (1 + t % 3), PotentialVariant::kGeneral);
    WorkFunction wf = WorkFunction::initial(inst);
    for (const auto& r : inst->requests) {
      const WorkFunction next = wf.update(r);
      const LemmaReport rep = verify_step(wf, next, r, cfg);
      for (const auto& c : rep.checks) {
        INFO(c.name << " " << c.lhs.str() << " " << c.relation << " " << c.rhs.str());
        CHECK((!c.applicable || c.holds));
      }
      wf = next;
    }
  }
}

TEST_CASE("verify_step preconditions") {
  const auto inst = line_instance({{1, 2}, {3, 1}});
  const PotentialConfig cnn = default_constants(kHalf, PotentialVariant::kCnn);
  const WorkFunction w0 = WorkFunction::initial(inst), w1 = w0.update(Req(1, 2)), w2 = w1.update(Req(3, 1));
  CHECK(code_of([&] { verify_step(w0, w2, Req(3, 1), cnn); }) == ErrorCode::kPrecondition);
  CHECK(code_of([&] { verify_step(w0, w1, Req(3, 1), cnn); }) == ErrorCode::kPrecondition);
  const auto other = line_instance({{1, 2}});
  CHECK(code_of([&] { verify_step(WorkFunction::initial(other), w1, Req(1, 2), cnn); }) ==
        ErrorCode::kPrecondition);
}
