#include "potential.hpp"

#include <algorithm>
#include <array>
#include <set>

#include "error.hpp"

namespace wfalab {

const char* variant_name(PotentialVariant v) {
  return v == PotentialVariant::kCnn ? "cnn" : "general";
}

// ---------------------------------------------------------------------------
// constants

const Rational& PotentialConfig::region_weight() const {
  return variant == PotentialVariant::kCnn ? alpha : beta;
}

const Rational& PotentialConfig::mix_weight() const {
  return variant == PotentialVariant::kCnn ? gamma : kappa;
}

SlackParam PotentialConfig::pair_param() const {
  return variant == PotentialVariant::kCnn ? SlackParam::lambda(lambda) : SlackParam::mu(mu);
}

Rational PotentialConfig::bound_third() const { return region_weight() * (Rational(1) - lambda); }

Rational PotentialConfig::bound_pair() const {
  return Rational(1, 2) * (Rational(1) - pair_param().value) - region_weight() * (Rational(1) + lambda);
}

Rational PotentialConfig::bound_region_second() const {
  if (variant == PotentialVariant::kCnn) return bound_pair();
  return Rational(1, 2) * (Rational(1) - mu) - eta * beta * (Rational(1) + lambda);
}

Rational PotentialConfig::bound_region_first() const {
  if (variant == PotentialVariant::kCnn) return bound_pair();
  return Rational(1, 2) * (Rational(1) - mu) - (eta + 1) * beta * (Rational(1) + lambda);
}

std::string PotentialConfig::describe() const {
  std::string s = std::string(variant_name(variant)) + " lambda=" + lambda.str();
  if (variant == PotentialVariant::kCnn) {
    s += " alpha=" + alpha.str() + " gamma=" + gamma.str();
  } else {
    s += " mu=" + mu.str() + " eta=" + eta.str() + " beta=" + beta.str() + " kappa=" + kappa.str();
  }
  s += " c1=" + c1.str() + " c2=" + c2.str() + " c3=" + c3.str() + " c4=" + c4.str() + " c5=" + c5.str();
  return s;
}

namespace {

void finish_constants(PotentialConfig& cfg, std::optional<Rational> mix) {
  const Rational w = cfg.region_weight();
  cfg.c4 = Rational(2) + Rational(4) * w + cfg.c3 * (Rational(1) + cfg.lambda);
  const Rational m = mix ? *mix : cfg.c2 / (cfg.c2 + cfg.c4);
  (cfg.variant == PotentialVariant::kCnn ? cfg.gamma : cfg.kappa) = m;
  cfg.c5 = wfalab::min((Rational(1) - m) * cfg.c1, m * cfg.c3);
}

void require(bool ok, const std::string& what) {
  if (!ok) fail(ErrorCode::kInvalidArgument, "potential constants: " + what);
}

void require_lambda(const Rational& lambda) {
  require(lambda.sign() > 0 && lambda < 1, "lambda must lie in (0,1), got " + lambda.str());
}

}  // namespace

PotentialConfig make_cnn_config(const Rational& lambda, const Rational& alpha, std::optional<Rational> gamma) {
  require_lambda(lambda);
  PotentialConfig cfg;
  cfg.variant = PotentialVariant::kCnn;
  cfg.lambda = lambda;
  cfg.alpha = alpha;
  const Rational one(1);
  cfg.c1 = alpha;
  cfg.c2 = alpha * (one - lambda);
  // Smallest of the three case constants of the G increase; the third
  // (one quarter of (1 - lambda)/(1 + lambda)) never binds under the bound on alpha.
  cfg.c3 = alpha * (one - lambda) / (one + lambda);
  finish_constants(cfg, std::move(gamma));
  return cfg;
}

PotentialConfig make_general_config(const Rational& lambda, const Rational& mu, const Rational& eta,
                                    const Rational& beta, std::optional<Rational> kappa) {
  require_lambda(lambda);
  PotentialConfig cfg;
  cfg.variant = PotentialVariant::kGeneral;
  cfg.lambda = lambda;
  cfg.mu = mu;
  cfg.eta = eta;
  cfg.beta = beta;
  const Rational one(1);
  const Rational half(1, 2);
  const Rational outer = half * (one - mu) - (eta + 1) * beta * (one + lambda);
  cfg.c1 = beta;
  cfg.c2 = wfalab::min(beta * (one - lambda), outer);
  cfg.c3 = wfalab::min(wfalab::min(beta, beta * (one - lambda) / (one + lambda)),
                       (outer - Rational(2) * beta) / (one + lambda));
  finish_constants(cfg, std::move(kappa));
  return cfg;
}

PotentialConfig default_constants(const Rational& lambda, PotentialVariant variant) {
  require_lambda(lambda);
  const Rational one(1);
  if (variant == PotentialVariant::kCnn) {
    return make_cnn_config(lambda, (one - lambda) / (Rational(12) + Rational(4) * lambda));
  }
  const Rational mu = (one + lambda) / 2;
  const Rational eta = Rational(ceil((one + mu) / (mu - lambda)) + 1);
  // Half of the tightest positivity constraint on beta; the outer-ball
  // bound (factor eta + 1) is always the tightest.
  const Rational half(1, 2);
  std::array<Rational, 3> caps = {
      half * (one - mu) / (one + lambda),
      half * (one - mu) / (eta * (one + lambda)),
      half * (one - mu) / ((eta + 1) * (one + lambda)),
  };
  Rational cap = caps[0];
  for (const auto& c : caps) cap = wfalab::min(cap, c);
  return make_general_config(lambda, mu, eta, cap / 2);
}

void validate(const PotentialConfig& cfg) {
  require_lambda(cfg.lambda);
  const Rational one(1);
  const Rational& lambda = cfg.lambda;
  const Rational mix_cap = cfg.c2 / (cfg.c2 + cfg.c4);
  if (cfg.variant == PotentialVariant::kCnn) {
    require(cfg.alpha.sign() > 0, "alpha must be positive");
    require(cfg.alpha <= (one - lambda) / (Rational(12) + Rational(4) * lambda),
            "alpha must not exceed (1-lambda)/(12+4lambda)");
    require(cfg.alpha < (one - lambda) / (Rational(2) * (one + lambda)),
            "alpha must be below (1-lambda)/(2(1+lambda))");
    require(cfg.gamma.sign() > 0 && cfg.gamma < 1, "gamma must lie in (0,1)");
    require(cfg.gamma <= mix_cap, "gamma must not exceed c2/(c2+c4) = " + mix_cap.str());
  } else {
    require(lambda < cfg.mu && cfg.mu < 1, "mu must lie in (lambda,1)");
    require(cfg.eta >= 1, "eta must be at least 1");
    require(cfg.eta * (cfg.mu - lambda) >= one + cfg.mu, "eta(mu-lambda) must be at least 1+mu");
    require(cfg.beta.sign() > 0 && cfg.beta < Rational(1, 2), "beta must lie in (0,1/2)");
    require(cfg.bound_pair().sign() > 0 && cfg.bound_region_second().sign() > 0 &&
                cfg.bound_region_first().sign() > 0,
            "beta too large for the domination bounds to be positive");
    require(cfg.c3.sign() > 0, "beta too large for a positive c3");
    require(cfg.kappa.sign() > 0 && cfg.kappa < 1, "kappa must lie in (0,1)");
    require(cfg.kappa <= mix_cap, "kappa must not exceed c2/(c2+c4) = " + mix_cap.str());
  }
}

void check_compatible(const PotentialConfig& cfg, const Instance& instance) {
  if (cfg.variant == PotentialVariant::kCnn &&
      (!instance.space_x.line_like() || !instance.space_y.line_like())) {
    fail(ErrorCode::kInvalidArgument, "the cnn potential needs line components, got " +
                                          instance.space_x.describe() + " x " + instance.space_y.describe());
  }
}

PotentialVariant auto_variant(const Instance& instance) {
  const bool plain = instance.space_x.kind() == MetricSpace::Kind::kRealLine &&
                     instance.space_y.kind() == MetricSpace::Kind::kRealLine;
  return plain ? PotentialVariant::kCnn : PotentialVariant::kGeneral;
}

// ---------------------------------------------------------------------------
// regions

namespace {

const DistanceTable& root_table(const MetricSpace& s) {
  const MetricSpace* cur = &s;
  while (cur->kind() == MetricSpace::Kind::kScaled) cur = &cur->base();
  return cur->table();
}

// Distances along one component without the generic dispatch.
struct Axis {
  bool line;
  Rational scale;
  const DistanceTable* table = nullptr;

  explicit Axis(const MetricSpace& s) : line(s.line_like()), scale(s.scale()) {
    if (!line) table = &root_table(s);
  }

  Rational unscaled(const SpacePoint& a, const SpacePoint& b) const {
    if (line) return (a.value() - b.value()).abs();
    return (*table)[a.idx()][b.idx()];
  }
  Rational dist(const SpacePoint& a, const SpacePoint& b) const {
    Rational d = unscaled(a, b);
    return scale == 1 ? d : d * scale;
  }
};

// The projection of a region on one component: a closed interval on a line,
// a list of points on a finite space.
struct AxisSet {
  Rational lo, hi;
  std::vector<std::size_t> members;
};

AxisSet axis_set(const Axis& axis, Region::Kind kind, const SpacePoint& c1, const SpacePoint& c2,
                 const Rational& eta) {
  AxisSet set;
  if (kind == Region::Kind::kBoks) {
    if (!axis.line) fail(ErrorCode::kInvalidArgument, "Boks needs line components");
    set.lo = wfalab::min(c1.value(), c2.value());
    set.hi = wfalab::max(c1.value(), c2.value());
    return set;
  }
  // Scaling multiplies both sides of the radius condition, so it is dropped.
  const Rational radius = eta * axis.unscaled(c1, c2);
  if (axis.line) {
    set.lo = c1.value() - radius;
    set.hi = c1.value() + radius;
    return set;
  }
  for (std::size_t z = 0; z < axis.table->size(); ++z) {
    if ((*axis.table)[z][c1.idx()] <= radius) set.members.push_back(z);
  }
  return set;
}

bool axis_contains(const Axis& axis, const AxisSet& set, const SpacePoint& p) {
  if (axis.line) return set.lo <= p.value() && p.value() <= set.hi;
  return std::binary_search(set.members.begin(), set.members.end(), p.idx());
}

// min over z in the set of d(a, z) + p*d(z, c).
Rational axis_min(const Axis& axis, const AxisSet& set, const SpacePoint& a, const SpacePoint& c,
                  const Rational& p) {
  if (axis.line) {
    // Convex in z with its free minimum at a (p <= 1), so clamping a is optimal.
    const Rational& av = a.value();
    const Rational z = av < set.lo ? set.lo : (set.hi < av ? set.hi : av);
    Rational v = (av - z).abs() + p * (z - c.value()).abs();
    return axis.scale == 1 ? v : v * axis.scale;
  }
  const auto& t = *axis.table;
  std::optional<Rational> best;
  for (std::size_t z : set.members) {
    Rational v = t[a.idx()][z] + p * t[z][c.idx()];
    if (!best || v < *best) best = std::move(v);
  }
  return axis.scale == 1 ? *best : *best * axis.scale;
}

struct RegionSets {
  AxisSet x;
  AxisSet y;
};

RegionSets region_sets(const Axis& ax, const Axis& ay, const Region& region) {
  return {axis_set(ax, region.kind, region.s1.x, region.s2.x, region.eta),
          axis_set(ay, region.kind, region.s1.y, region.s2.y, region.eta)};
}

// min over t in the region of W(t) + p*d(t, s3), through the anchors.
Rational region_reach(const WorkFunction& wf, const Axis& ax, const Axis& ay, const RegionSets& sets,
                      const ProductPoint& s3, const Rational& p) {
  const auto& anchors = wf.anchors();
  const auto& values = wf.anchor_values();
  std::optional<Rational> best;
  for (std::size_t k = 0; k < anchors.size(); ++k) {
    Rational v = values[k] + axis_min(ax, sets.x, anchors[k].x, s3.x, p);
    if (best && !(v < *best)) continue;
    v += axis_min(ay, sets.y, anchors[k].y, s3.y, p);
    if (!best || v < *best) best = std::move(v);
  }
  return *best;
}

}  // namespace

bool region_membership(const Instance& instance, const Region& region, const ProductPoint& t) {
  const Axis ax(instance.space_x);
  const Axis ay(instance.space_y);
  const RegionSets sets = region_sets(ax, ay, region);
  return axis_contains(ax, sets.x, t.x) && axis_contains(ay, sets.y, t.y);
}

Rational region_slack(const WorkFunction& wf, const ProductPoint& s3, const Region& region,
                      const SlackParam& param) {
  const Axis ax(wf.instance().space_x);
  const Axis ay(wf.instance().space_y);
  return region_reach(wf, ax, ay, region_sets(ax, ay, region), s3, param.value) - wf.evaluate(s3);
}

Region region_for(const PotentialConfig& cfg, const ProductPoint& s1, const ProductPoint& s2) {
  if (cfg.variant == PotentialVariant::kCnn) return Region::boks(s1, s2);
  return Region::spheres(s1, s2, cfg.eta);
}

// ---------------------------------------------------------------------------
// H, F, G at arbitrary points

Rational h_value(const WorkFunction& wf, const ProductPoint& s1, const ProductPoint& s2,
                 const SlackParam& pair) {
  const std::array<ProductPoint, 1> one{s1};
  const Rational via_slack = wf.evaluate(s1) - Rational(1, 2) * slack(wf, s2, one, pair);
  const Rational closed = Rational(1, 2) * (wf.evaluate(s1) + wf.evaluate(s2)) -
                          pair.value / 2 * wf.distance(s1, s2);
  if (via_slack != closed) {
    fail(ErrorCode::kInternal, "H formulas disagree at " + s1.str() + "," + s2.str());
  }
  return closed;
}

Rational f_value(const WorkFunction& wf, const ProductPoint& s1, const ProductPoint& s2,
                 const ProductPoint& s3, const PotentialConfig& cfg) {
  const std::array<ProductPoint, 2> pair{s1, s2};
  return h_value(wf, s1, s2, cfg.pair_param()) -
         cfg.region_weight() * slack(wf, s3, pair, cfg.point_param());
}

Rational g_value(const WorkFunction& wf, const ProductPoint& s1, const ProductPoint& s2,
                 const ProductPoint& s3, const PotentialConfig& cfg) {
  check_compatible(cfg, wf.instance());
  return h_value(wf, s1, s2, cfg.pair_param()) -
         cfg.region_weight() * region_slack(wf, s3, region_for(cfg, s1, s2), cfg.point_param());
}

std::size_t Triple::cardinality() const {
  if (s1 == s2) return s1 == s3 ? 1 : 2;
  return (s3 == s1 || s3 == s2) ? 2 : 3;
}

std::string Triple::str() const { return "[" + s1.str() + "," + s2.str() + "," + s3.str() + "]"; }

// ---------------------------------------------------------------------------
// exhaustive minimization over candidate triples

namespace {

std::vector<Rational> refine_line(const std::vector<SpacePoint>& coords) {
  std::vector<Rational> out;
  out.reserve(2 * coords.size() + 2);
  out.push_back(coords.front().value() - 1);
  for (std::size_t i = 0; i < coords.size(); ++i) {
    out.push_back(coords[i].value());
    if (i + 1 < coords.size()) out.push_back((coords[i].value() + coords[i + 1].value()) / 2);
  }
  out.push_back(coords.back().value() + 1);
  return out;
}

std::vector<SpacePoint> line_candidates(const MetricSpace& space, const std::vector<SpacePoint>& grid,
                                        bool refine) {
  if (!space.line_like()) return space.points();
  if (!refine) return grid;
  std::vector<SpacePoint> out;
  for (auto& v : refine_line(grid)) out.push_back(SpacePoint::real(std::move(v)));
  return out;
}

// Tables over a fixed candidate list: W, distances, H and the weighted
// slack of every candidate to every other one.
class TripleTable {
 public:
  TripleTable(const WorkFunction& wf, const PotentialConfig& cfg, std::vector<ProductPoint> pts)
      : wf_(wf), cfg_(cfg), pts_(std::move(pts)), ax_(wf.instance().space_x), ay_(wf.instance().space_y) {
    const std::size_t n = pts_.size();
    w_.reserve(n);
    for (const auto& p : pts_) w_.push_back(wf.evaluate(p));
    const Rational pair = cfg.pair_param().value;
    const Rational lam = cfg.lambda;
    const Rational& weight = cfg.region_weight();
    h_.assign(n, std::vector<Rational>(n));
    wa_.assign(n, std::vector<Rational>(n));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const Rational d = ax_.dist(pts_[i].x, pts_[j].x) + ay_.dist(pts_[i].y, pts_[j].y);
        h_[i][j] = (w_[i] + w_[j] - pair * d) / 2;
        wa_[i][j] = weight * (w_[i] + lam * d - w_[j]);  // weighted Sl(j; i)
      }
    }
  }

  std::size_t size() const { return pts_.size(); }
  const ProductPoint& point(std::size_t i) const { return pts_[i]; }
  const Rational& h(std::size_t i, std::size_t j) const { return h_[i][j]; }
  Rational f(std::size_t i, std::size_t j, std::size_t k) const {
    return h_[i][j] - wfalab::min(wa_[i][k], wa_[j][k]);
  }
  RegionSets sets(std::size_t i, std::size_t j) const {
    return region_sets(ax_, ay_, region_for(cfg_, pts_[i], pts_[j]));
  }
  Rational g(std::size_t i, std::size_t j, std::size_t k, const RegionSets& sets) const {
    const Rational reach = region_reach(wf_, ax_, ay_, sets, pts_[k], cfg_.lambda);
    return h_[i][j] - cfg_.region_weight() * (reach - w_[k]);
  }
  Rational g(std::size_t i, std::size_t j, std::size_t k) const { return g(i, j, k, sets(i, j)); }

  Triple triple(std::size_t i, std::size_t j, std::size_t k) const { return {pts_[i], pts_[j], pts_[k]}; }

  TripleMin min_f() const {
    const std::size_t n = size();
    std::array<std::size_t, 3> arg{0, 0, 0};
    Rational best = f(0, 0, 0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) {
          Rational v = f(i, j, k);
          if (v < best) {
            best = std::move(v);
            arg = {i, j, k};
          }
        }
    return {best, triple(arg[0], arg[1], arg[2])};
  }

  // G >= F pointwise, so triples whose F already reaches the incumbent are
  // skipped. The incumbent starts at G of the F minimizer.
  TripleMin min_g(const TripleMin& fmin) const {
    const std::size_t n = size();
    Rational bound = g_at(fmin.triple);
    bool have = false;
    std::array<std::size_t, 3> arg{0, 0, 0};
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        std::optional<RegionSets> s;
        for (std::size_t k = 0; k < n; ++k) {
          const Rational fv = f(i, j, k);
          if (fv > bound || (have && fv == bound)) continue;
          if (!s) s = sets(i, j);
          Rational gv = g(i, j, k, *s);
          if (have ? gv < bound : gv <= bound) {
            bound = std::move(gv);
            have = true;
            arg = {i, j, k};
          }
        }
      }
    if (!have) fail(ErrorCode::kInternal, "G minimization lost its incumbent");
    return {bound, triple(arg[0], arg[1], arg[2])};
  }

  PairMin min_h() const {
    const std::size_t n = size();
    std::size_t bi = 0, bj = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (h_[i][j] < h_[bi][bj]) {
          bi = i;
          bj = j;
        }
    return {h_[bi][bj], pts_[bi], pts_[bj]};
  }

  std::size_t index_of(const ProductPoint& p) const {
    auto it = std::lower_bound(pts_.begin(), pts_.end(), p);
    if (it == pts_.end() || *it != p) fail(ErrorCode::kInternal, "point " + p.str() + " is not a candidate");
    return static_cast<std::size_t>(it - pts_.begin());
  }

  Rational g_at(const Triple& t) const { return g(index_of(t.s1), index_of(t.s2), index_of(t.s3)); }

 private:
  const WorkFunction& wf_;
  const PotentialConfig& cfg_;
  std::vector<ProductPoint> pts_;
  Axis ax_;
  Axis ay_;
  std::vector<Rational> w_;
  std::vector<std::vector<Rational>> h_;
  std::vector<std::vector<Rational>> wa_;
};

}  // namespace

std::vector<ProductPoint> potential_candidates(const WorkFunction& wf, bool refine) {
  if (wf.step() == 0) return {wf.instance().origin};
  const RequestPoint r = wf.support_request();
  const Instance& inst = wf.instance();
  std::vector<ProductPoint> pts;
  for (const auto& y : line_candidates(inst.space_y, wf.grid().ys, refine)) pts.push_back({r.x, y});
  for (const auto& x : line_candidates(inst.space_x, wf.grid().xs, refine)) pts.push_back({x, r.y});
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

PotentialSummary summarize(const WorkFunction& wf, const PotentialConfig& cfg, bool refine) {
  check_compatible(cfg, wf.instance());
  const TripleTable table(wf, cfg, potential_candidates(wf, refine));
  PotentialSummary s;
  s.f = table.min_f();
  s.g = table.min_g(s.f);
  s.h = table.min_h();
  const Rational& m = cfg.mix_weight();
  s.phi = (Rational(1) - m) * s.f.value + m * s.g.value;
  return s;
}

TripleMin min_f(const WorkFunction& wf, const PotentialConfig& cfg, bool refine) {
  check_compatible(cfg, wf.instance());
  return TripleTable(wf, cfg, potential_candidates(wf, refine)).min_f();
}

TripleMin min_g(const WorkFunction& wf, const PotentialConfig& cfg, bool refine) {
  check_compatible(cfg, wf.instance());
  const TripleTable table(wf, cfg, potential_candidates(wf, refine));
  return table.min_g(table.min_f());
}

PairMin min_h(const WorkFunction& wf, const PotentialConfig& cfg, bool refine) {
  return TripleTable(wf, cfg, potential_candidates(wf, refine)).min_h();
}

Rational phi(const WorkFunction& wf, const PotentialConfig& cfg) { return summarize(wf, cfg).phi; }

// ---------------------------------------------------------------------------
// per-step verification

std::size_t LemmaReport::failures() const {
  std::size_t n = 0;
  for (const auto& c : checks) n += (c.applicable && !c.holds) ? 1 : 0;
  return n;
}

const LemmaCheck* LemmaReport::find(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

namespace {

// Keeps the worst sample of one named inequality.
class CheckBuilder {
 public:
  CheckBuilder(std::string name, std::string relation) {
    check_.name = std::move(name);
    check_.relation = std::move(relation);
  }

  void add(const Rational& lhs, const Rational& rhs) {
    Rational margin;
    bool ok;
    const std::string& rel = check_.relation;
    if (rel == ">=") {
      margin = lhs - rhs;
      ok = margin.sign() >= 0;
    } else if (rel == ">") {
      margin = lhs - rhs;
      ok = margin.sign() > 0;
    } else if (rel == "<=") {
      margin = rhs - lhs;
      ok = margin.sign() >= 0;
    } else {
      margin = -(lhs - rhs).abs();
      ok = margin.is_zero();
    }
    if (check_.samples == 0 || margin < check_.margin) {
      check_.lhs = lhs;
      check_.rhs = rhs;
      check_.margin = margin;
    }
    check_.holds = check_.holds && ok;
    ++check_.samples;
  }

  LemmaCheck done(bool applicable = true) {
    check_.applicable = applicable && check_.samples > 0;
    return check_;
  }

 private:
  LemmaCheck check_;
};

LemmaCheck single(std::string name, std::string relation, const Rational& lhs, const Rational& rhs,
                  bool applicable = true) {
  CheckBuilder b(std::move(name), std::move(relation));
  b.add(lhs, rhs);
  return b.done(applicable);
}

Triple with_position(Triple t, int pos, const ProductPoint& p) {
  (pos == 0 ? t.s1 : pos == 1 ? t.s2 : t.s3) = p;
  return t;
}

const ProductPoint& at(const Triple& t, int pos) { return pos == 0 ? t.s1 : pos == 1 ? t.s2 : t.s3; }

// Dense coordinate-wise search around a minimizer at step 1/16 within one
// unit, along the support request's lines.
void local_search(const WorkFunction& wf, const PotentialConfig& cfg, const Triple& best,
                  const Rational& value, bool use_g, CheckBuilder& out) {
  const RequestPoint r = wf.support_request();
  const Instance& inst = wf.instance();
  const Rational step(1, 16);
  for (int pos = 0; pos < 3; ++pos) {
    const ProductPoint& p = at(best, pos);
    for (int axis = 0; axis < 2; ++axis) {
      const bool vary_y = axis == 0;
      const MetricSpace& space = vary_y ? inst.space_y : inst.space_x;
      if (!space.line_like()) continue;
      if (vary_y ? p.x != r.x : p.y != r.y) continue;
      const Rational centre = vary_y ? p.y.value() : p.x.value();
      for (int k = -16; k <= 16; ++k) {
        if (k == 0) continue;
        const SpacePoint v = SpacePoint::real(centre + step * k);
        const ProductPoint q = vary_y ? ProductPoint{p.x, v} : ProductPoint{v, p.y};
        const Triple t = with_position(best, pos, q);
        const Rational val = use_g ? g_value(wf, t.s1, t.s2, t.s3, cfg) : f_value(wf, t.s1, t.s2, t.s3, cfg);
        out.add(val, value);
      }
    }
  }
}

}  // namespace

LemmaReport verify_step(const WorkFunction& before, const WorkFunction& after, const RequestPoint& next,
                        const PotentialConfig& cfg, const VerifyOptions& options) {
  if (after.step() != before.step() + 1 || !after.last_request() || *after.last_request() != next ||
      after.instance_ptr() != before.instance_ptr()) {
    fail(ErrorCode::kPrecondition, "verify_step needs after = before.update(next)");
  }
  const Instance& inst = before.instance();
  check_compatible(cfg, inst);
  const Rational one(1);
  const Rational& lambda = cfg.lambda;

  LemmaReport rep;
  rep.before = options.before ? *options.before : summarize(before, cfg);
  rep.after = summarize(after, cfg);
  const ExtendedCost ext = extended_cost(before, next, lambda);
  rep.nabla = ext.value;
  rep.nabla_witness = ext.witness;
  const RequestPoint prev = before.support_request();
  rep.delta_x = inst.space_x.distance(prev.x, next.x);
  rep.delta_y = inst.space_y.distance(prev.y, next.y);
  const Rational big = wfalab::max(rep.delta_x, rep.delta_y);
  const Rational small = wfalab::min(rep.delta_x, rep.delta_y);
  const Triple& ft = rep.after.f.triple;
  const Triple& gt = rep.after.g.triple;
  rep.case_a = ft.cardinality() <= 2;
  auto& checks = rep.checks;

  if (before.step() == 0) {
    checks.push_back(single("phi_initial_zero", "==", rep.before.phi, 0));
  }

  // Off-request grid points, each with an anchor that dominates it.
  std::vector<std::pair<ProductPoint, ProductPoint>> dominated;
  for (const auto& [s, w] : after.grid_values()) {
    if (serves(s, next)) continue;
    const auto& anchors = after.anchors();
    for (std::size_t k = 0; k < anchors.size(); ++k) {
      if (after.anchor_values()[k] + after.distance(anchors[k], s) == w) {
        dominated.emplace_back(s, anchors[k]);
        break;
      }
    }
  }

  // (1) minimizers lie on the new request, and leaving it strictly costs.
  for (int use_g = 0; use_g < 2; ++use_g) {
    const Triple& t = use_g ? gt : ft;
    const Rational& value = use_g ? rep.after.g.value : rep.after.f.value;
    const std::string tag = use_g ? "G" : "F";
    int off = 0;
    for (int pos = 0; pos < 3; ++pos) off += serves(at(t, pos), next) ? 0 : 1;
    checks.push_back(single("minimizer_serves_" + tag, "==", off, 0));
    CheckBuilder b("min_in_r_" + tag, ">");
    for (const auto& [s, unused] : dominated) {
      for (int pos = 0; pos < 3; ++pos) {
        const Triple q = with_position(t, pos, s);
        b.add(use_g ? g_value(after, q.s1, q.s2, q.s3, cfg) : f_value(after, q.s1, q.s2, q.s3, cfg), value);
      }
    }
    checks.push_back(b.done());
  }

  // (2) replacing a dominated point by its dominator lowers F and G.
  {
    const std::array<Rational, 6> per_unit = {cfg.bound_third(), cfg.bound_pair(), cfg.bound_pair(),
                                              cfg.bound_third(), cfg.bound_region_second(),
                                              cfg.bound_region_first()};
    const std::array<const char*, 6> names = {"dominance_a", "dominance_b", "dominance_c",
                                              "dominance_d", "dominance_e", "dominance_f"};
    std::vector<CheckBuilder> builders;
    for (int k = 0; k < 6; ++k) builders.emplace_back(names[k], ">=");
    std::vector<Triple> bases{ft};
    if (!(gt == ft)) bases.push_back(gt);
    for (const auto& [s, t] : dominated) {
      const Rational delta = after.distance(s, t);
      for (const auto& base : bases) {
        for (int k = 0; k < 6; ++k) {
          const bool use_g = k >= 3;
          const int pos = 2 - (k % 3);  // a,d: third point; b,e: second; c,f: first
          const Triple hi = with_position(base, pos, s);
          const Triple lo = with_position(base, pos, t);
          const Rational diff =
              use_g ? g_value(after, hi.s1, hi.s2, hi.s3, cfg) - g_value(after, lo.s1, lo.s2, lo.s3, cfg)
                    : f_value(after, hi.s1, hi.s2, hi.s3, cfg) - f_value(after, lo.s1, lo.s2, lo.s3, cfg);
          builders[k].add(diff, delta * per_unit[k]);
        }
      }
    }
    for (auto& b : builders) checks.push_back(b.done());
  }

  // (3) min F <= min G <= min H
  checks.push_back(single("chain_F_le_G", "<=", rep.after.f.value, rep.after.g.value));
  checks.push_back(single("chain_G_le_H", "<=", rep.after.g.value, rep.after.h.value));

  const Rational df = rep.after.f.value - rep.before.f.value;
  const Rational dg = rep.after.g.value - rep.before.g.value;
  const Rational dphi = rep.after.phi - rep.before.phi;

  // (4) F increase by case
  checks.push_back(single("F_increase_caseA", ">=", df, cfg.c1 * rep.nabla, rep.case_a));
  checks.push_back(single("F_increase_caseB", ">=", df, cfg.c2 * small, !rep.case_a));
  // (5) G increase
  checks.push_back(single("G_increase", ">=", dg, cfg.c3 * rep.nabla - cfg.c4 * small));
  // (6) case A: min G does not drop
  checks.push_back(single("G_monotone_caseA", ">=", rep.after.g.value, rep.before.g.value, rep.case_a));
  // (7) extended cost against the larger coordinate move
  checks.push_back(single("nabla_le_delta", "<=", rep.nabla, (one + lambda) * big));
  // (8) potential increase
  checks.push_back(single("phi_increase", ">=", dphi, cfg.c5 * rep.nabla));
  if (rep.nabla.sign() > 0) rep.increase_ratio = dphi / rep.nabla;

  // (9) minimizer points off the old request lines are dominated from them
  {
    CheckBuilder b("domination_candidates", "==");
    std::set<ProductPoint> seen;
    for (const Triple* t : {&ft, &gt}) {
      for (int pos = 0; pos < 3; ++pos) {
        const ProductPoint& p = at(*t, pos);
        if (!seen.insert(p).second) continue;
        if (p.x == next.x && p.y != prev.y) {
          const ProductPoint d{prev.x, p.y};
          b.add(before.evaluate(p), before.evaluate(d) + before.distance(d, p));
        }
        if (p.y == next.y && p.x != prev.x) {
          const ProductPoint d{p.x, prev.y};
          b.add(before.evaluate(p), before.evaluate(d) + before.distance(d, p));
        }
      }
    }
    checks.push_back(b.done());
  }

  // (10) perturb the coordinate of the new request that moved least
  if (options.probe) {
    const bool shift_y = rep.delta_x >= rep.delta_y;
    const MetricSpace& space = shift_y ? inst.space_y : inst.space_x;
    if (space.line_like()) {
      RequestPoint moved = next;
      SpacePoint& c = shift_y ? moved.y : moved.x;
      c = SpacePoint::real(c.value() + options.probe_step);
      const Rational eps = space.scale() * options.probe_step;
      const WorkFunction probe = before.apply_request(moved);
      const Rational g2 = min_g(probe, cfg).value;
      const Rational n2 = extended_cost(before, moved, lambda).value;
      const Rational gshift = (g2 - rep.after.g.value).abs();
      const Rational nshift = (n2 - rep.nabla).abs();
      rep.probe_g_ratio = gshift / eps;
      rep.probe_nabla_ratio = nshift / eps;
      checks.push_back(single("lipschitz_min_G", "<=", gshift, cfg.lipschitz_g() * eps));
      checks.push_back(single("lipschitz_nabla", "<=", nshift, (one + lambda) * eps));
    }
  }

  // at most two distinct points: the three minima coincide
  checks.push_back(single("cardinality_F_eq_H", "==", rep.after.f.value, rep.after.h.value, rep.case_a));
  checks.push_back(single("cardinality_G_eq_H", "==", rep.after.g.value, rep.after.h.value, rep.case_a));

  // triples on one line of the new request: some pair's H is at most G
  {
    CheckBuilder b("convex_containment", "<=");
    const TripleTable table(after, cfg, potential_candidates(after));
    for (int line = 0; line < 2; ++line) {
      std::vector<std::size_t> idx;
      for (std::size_t i = 0; i < table.size(); ++i) {
        const ProductPoint& p = table.point(i);
        if (line == 0 ? p.x == next.x : p.y == next.y) idx.push_back(i);
      }
      const std::size_t m = idx.size();
      const std::size_t total = m * m * m;
      const std::size_t stride = total > 1500 ? total / 1500 + 1 : 1;
      for (std::size_t code = 0; code < total; code += stride) {
        const std::size_t i = idx[code / (m * m)], j = idx[(code / m) % m], k = idx[code % m];
        Rational hmin = table.h(i, j);
        for (std::size_t u : {i, j, k})
          for (std::size_t v : {i, j, k}) hmin = wfalab::min(hmin, table.h(u, v));
        b.add(hmin, table.g(i, j, k));
      }
    }
    checks.push_back(b.done());
  }

  if (options.audit) {
    const PotentialSummary fine = summarize(after, cfg, true);
    checks.push_back(single("audit_refined_F", ">=", fine.f.value, rep.after.f.value));
    checks.push_back(single("audit_refined_G", ">=", fine.g.value, rep.after.g.value));
    CheckBuilder lf("audit_local_F", ">=");
    local_search(after, cfg, ft, rep.after.f.value, false, lf);
    checks.push_back(lf.done(after.step() > 0));
    CheckBuilder lg("audit_local_G", ">=");
    local_search(after, cfg, gt, rep.after.g.value, true, lg);
    checks.push_back(lg.done(after.step() > 0));
  }
  return rep;
}

}  // namespace wfalab
