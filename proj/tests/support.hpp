#pragma once

#include <cstdint>
#include <memory>
#include <random>

#include "harness.hpp"
#include "offline.hpp"

namespace wfatest {

using namespace wfalab;

inline SpacePoint R(std::int64_t n, std::int64_t d = 1) { return SpacePoint::real(Rational(n, d)); }
inline ProductPoint P(std::int64_t x, std::int64_t y) { return real_point(x, y); }
inline RequestPoint Req(std::int64_t x, std::int64_t y) { return {R(x), R(y)}; }

inline std::shared_ptr<const Instance> share(Instance inst) {
  return std::make_shared<const Instance>(std::move(inst));
}

inline std::shared_ptr<const Instance> line_instance(std::initializer_list<std::pair<int, int>> reqs) {
  Instance inst;
  inst.origin = P(0, 0);
  for (auto [x, y] : reqs) inst.requests.push_back(Req(x, y));
  return share(std::move(inst));
}

inline std::shared_ptr<const Instance> paper_example(std::size_t m) {
  return share(generate(GeneratorSpec::paper_example(m), 0));
}

inline WorkFunction advance_to(std::shared_ptr<const Instance> inst, std::size_t steps) {
  WorkFunction wf = WorkFunction::initial(inst);
  for (std::size_t i = 0; i < steps; ++i) wf = wf.update(inst->requests[i]);
  return wf;
}

// Brute-force work value at s from one enumeration of endpoints.
inline Rational value_from_endpoints(const Instance& inst, const std::map<ProductPoint, Rational>& ends,
                                     const ProductPoint& s) {
  std::optional<Rational> best;
  for (const auto& [p, c] : ends) {
    Rational v = c + inst.distance(p, s);
    if (!best || v < *best) best = std::move(v);
  }
  return *best;
}

// Uniform quarter-integer in [-range, range].
inline Rational quarter(std::mt19937_64& rng, int range) {
  return Rational(static_cast<std::int64_t>(rng() % (8 * range + 1)) - 4 * range, 4);
}

inline ProductPoint random_point(std::mt19937_64& rng, const Instance& inst, int range) {
  auto coord = [&](const MetricSpace& s) {
    if (s.line_like()) return SpacePoint::real(quarter(rng, range));
    return SpacePoint::index(rng() % s.size());
  };
  return {coord(inst.space_x), coord(inst.space_y)};
}

}  // namespace wfatest

#include <string>
#include <vector>

namespace wfatest {

// A random instance for the property samplers: both line spaces, both
// uniform finite spaces, or weighted lines, chosen by kind % 3.
inline std::shared_ptr<const Instance> random_instance(std::mt19937_64& rng, int kind, std::size_t n, int range) {
  GeneratorSpec g = kind % 3 == 0   ? GeneratorSpec::uniform_random(n, range)
                    : kind % 3 == 1 ? GeneratorSpec::finite_uniform(4, n)
                                    : GeneratorSpec::weighted_line(1, 3, n, range);
  return share(generate(g, rng()));
}

inline std::vector<ProductPoint> random_set(std::mt19937_64& rng, const Instance& inst, std::size_t size, int range) {
  std::vector<ProductPoint> c;
  for (std::size_t i = 0; i < size; ++i) c.push_back(random_point(rng, inst, range));
  return c;
}

// Point between a and b on both line components (same point on finite ones).
inline ProductPoint between(std::mt19937_64& rng, const ProductPoint& a, const ProductPoint& b) {
  auto mix = [&](const SpacePoint& u, const SpacePoint& v) {
    if (!u.is_real()) return u;
    const Rational t(static_cast<std::int64_t>(rng() % 5), 4);
    return SpacePoint::real(u.value() + t * (v.value() - u.value()));
  };
  return {mix(a.x, b.x), mix(a.y, b.y)};
}

// Samples the five elementary slack properties on random work functions.
// Returns one line per violated sample.
inline std::vector<std::string> slack_suite(std::uint64_t seed, int samples) {
  std::mt19937_64 rng(seed);
  std::vector<std::string> bad;
  const Rational lambdas[] = {Rational(1, 4), Rational(1, 2), Rational(3, 4)};
  auto note = [&](int k, const std::string& what) { bad.push_back("sample " + std::to_string(k) + ": " + what); };
  for (int k = 0; k < samples; ++k) {
    const auto inst = random_instance(rng, k, 1 + rng() % 5, 4);
    const WorkFunction wf = advance_to(inst, inst->requests.size());
    const SlackParam p = SlackParam::lambda(lambdas[rng() % 3]);
    const Rational one_plus = 1 + p.value;
    const ProductPoint s = random_point(rng, *inst, 5);

    // (i) subsets have larger slack
    auto c2 = random_set(rng, *inst, 2 + rng() % 4, 5);
    std::vector<ProductPoint> c1(c2.begin(), c2.begin() + 1 + rng() % (c2.size() - 1));
    if (slack(wf, s, c1, p) < slack(wf, s, c2, p)) note(k, "subset property");

    // (ii) some member of C has zero slack to C
    bool zero = false;
    for (const auto& c : c2) zero = zero || slack(wf, c, c2, p).is_zero();
    if (!zero) note(k, "zero-slack member");

    // (iii) transitivity along a geodesic
    const ProductPoint s1 = random_point(rng, *inst, 5), s3 = random_point(rng, *inst, 5);
    const ProductPoint s2 = between(rng, s1, s3);
    if (wf.distance(s1, s2) + wf.distance(s2, s3) == wf.distance(s1, s3)) {
      const std::vector<ProductPoint> a{s1}, b{s2};
      if (slack(wf, s3, a, p) != slack(wf, s3, b, p) + slack(wf, s2, a, p)) note(k, "transitivity");
    }

    // (iv) moving every point of the set by at most delta
    std::vector<ProductPoint> moved;
    Rational delta(0);
    for (const auto& c : c2) {
      const ProductPoint m = between(rng, c, random_point(rng, *inst, 5));
      Rational near = wf.distance(m, c2[0]);
      for (const auto& d : c2) near = wfalab::min(near, wf.distance(m, d));
      delta = wfalab::max(delta, near);
      moved.push_back(m);
    }
    if (slack(wf, s, moved, p) < slack(wf, s, c2, p) - one_plus * delta) note(k, "set perturbation");

    // (v) moving the point; stronger when the new point dominates the old
    const ProductPoint t = random_point(rng, *inst, 5);
    if (slack(wf, t, c2, p) < slack(wf, s, c2, p) - one_plus * wf.distance(s, t)) note(k, "point perturbation");
    for (std::size_t a = 0; a < wf.anchors().size(); ++a) {
      const ProductPoint& g = wf.anchors()[a];
      if (wf.anchor_values()[a] + wf.distance(g, s) != wf.evaluate(s)) continue;
      if (!dominates(wf, g, s)) note(k, "anchor does not dominate");
      if (slack(wf, g, c2, p) < slack(wf, s, c2, p) + (1 - p.value) * wf.distance(s, g)) note(k, "dominated move");
      break;
    }

    // The closed form for a request agrees with explicit candidates.
    const RequestPoint r{random_point(rng, *inst, 5).x, random_point(rng, *inst, 5).y};
    if (slack(wf, s, r, p) != slack_by_candidates(wf, s, r, p)) note(k, "request slack closed form");
  }
  return bad;
}

}  // namespace wfatest

namespace wfatest {

// Max of Sl(s; next) over s on the lines of the support request, sampled at
// the given step over the grid's coordinate span plus a margin of 2.
// Finite components are enumerated.
inline Rational nabla_dense(const WorkFunction& wf, const RequestPoint& next, const Rational& lambda,
                            const Rational& step) {
  const SlackParam p = SlackParam::lambda(lambda);
  if (wf.step() == 0) return slack_by_candidates(wf, wf.instance().origin, next, p);
  const RequestPoint sup = wf.support_request();
  std::optional<Rational> best;
  auto consider = [&](const ProductPoint& s) {
    Rational v = slack_by_candidates(wf, s, next, p);
    if (!best || v > *best) best = std::move(v);
  };
  auto sweep = [&](const MetricSpace& space, const std::vector<SpacePoint>& coords, auto make) {
    if (!space.line_like()) {
      for (const auto& c : space.points()) consider(make(c));
      return;
    }
    Rational lo = coords.front().value() - 2, hi = coords.back().value() + 2;
    lo = wfalab::min(lo, wfalab::min(next.x.is_real() ? next.x.value() : lo, next.y.is_real() ? next.y.value() : lo) - 2);
    hi = wfalab::max(hi, wfalab::max(next.x.is_real() ? next.x.value() : hi, next.y.is_real() ? next.y.value() : hi) + 2);
    for (Rational v = lo; v <= hi; v += step) consider(make(SpacePoint::real(v)));
  };
  const Instance& inst = wf.instance();
  sweep(inst.space_y, wf.grid().ys, [&](const SpacePoint& v) { return ProductPoint{sup.x, v}; });
  sweep(inst.space_x, wf.grid().xs, [&](const SpacePoint& v) { return ProductPoint{v, sup.y}; });
  return *best;
}

}  // namespace wfatest
