#include "serialize.hpp"

#include <cstdio>

#include <json.hpp>

#include "error.hpp"

namespace wfalab {

using nlohmann::json;
using ordered = nlohmann::ordered_json;

namespace {

Rational rational_from(const json& j, const std::string& what) {
  if (j.is_string()) return Rational::parse(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  if (j.is_number_float()) return Rational::parse(j.dump());
  fail(ErrorCode::kParse, what + ": expected a rational, got " + j.dump());
}

MetricSpace space_from(const json& j) {
  if (!j.is_object() || !j.contains("kind")) fail(ErrorCode::kParse, "space needs a \"kind\"");
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "real_line") return MetricSpace::real_line();
  if (kind == "uniform") return MetricSpace::uniform(j.at("size").get<std::size_t>());
  if (kind == "finite") {
    DistanceTable table;
    for (const auto& row : j.at("table")) {
      auto& out = table.emplace_back();
      for (const auto& v : row) out.push_back(rational_from(v, "distance"));
    }
    return MetricSpace::finite_matrix(std::move(table));
  }
  if (kind == "scaled") return MetricSpace::scaled(space_from(j.at("base")), rational_from(j.at("weight"), "weight"));
  fail(ErrorCode::kParse, "unknown space kind '" + kind + "'");
}

ordered space_to(const MetricSpace& s) {
  switch (s.kind()) {
    case MetricSpace::Kind::kRealLine:
      return {{"kind", "real_line"}};
    case MetricSpace::Kind::kScaled:
      return {{"kind", "scaled"}, {"weight", s.weight().str()}, {"base", space_to(s.base())}};
    case MetricSpace::Kind::kFiniteMatrix: {
      const auto& t = s.table();
      bool uniform = true;
      for (std::size_t i = 0; i < t.size(); ++i)
        for (std::size_t j = 0; j < t.size(); ++j) uniform = uniform && t[i][j] == Rational(i == j ? 0 : 1);
      if (uniform) return {{"kind", "uniform"}, {"size", t.size()}};
      ordered rows = ordered::array();
      for (const auto& row : t) {
        ordered r = ordered::array();
        for (const auto& v : row) r.push_back(v.str());
        rows.push_back(std::move(r));
      }
      return {{"kind", "finite"}, {"table", std::move(rows)}};
    }
  }
  return {};
}

SpacePoint coord_from(const MetricSpace& space, const json& j) {
  if (space.line_like()) return SpacePoint::real(rational_from(j, "coordinate"));
  if (!j.is_number_unsigned() && !j.is_number_integer()) {
    fail(ErrorCode::kParse, "finite coordinate must be an index, got " + j.dump());
  }
  const auto v = j.get<std::int64_t>();
  if (v < 0) fail(ErrorCode::kParse, "negative index " + j.dump());
  return SpacePoint::index(static_cast<std::size_t>(v));
}

ordered coord_to(const SpacePoint& p) {
  if (p.is_real()) return p.value().str();
  return p.idx();
}

ordered point_to(const ProductPoint& p) { return ordered::array({coord_to(p.x), coord_to(p.y)}); }
ordered point_to(const RequestPoint& p) { return ordered::array({coord_to(p.x), coord_to(p.y)}); }

template <class T>
ordered opt_rational(const std::optional<T>& v) {
  if (!v) return nullptr;
  return v->str();
}

ordered triple_to(const Triple& t) {
  return ordered::array({point_to(t.s1), point_to(t.s2), point_to(t.s3)});
}

ordered summary_to(const PotentialSummary& s) {
  return {{"minF", s.f.value.str()},
          {"argminF", triple_to(s.f.triple)},
          {"minG", s.g.value.str()},
          {"argminG", triple_to(s.g.triple)},
          {"minH", s.h.value.str()},
          {"argminH", ordered::array({point_to(s.h.s1), point_to(s.h.s2)})},
          {"phi", s.phi.str()}};
}

ordered check_to(const LemmaCheck& c) {
  return {{"name", c.name},         {"relation", c.relation}, {"applicable", c.applicable},
          {"holds", c.holds},       {"lhs", c.lhs.str()},     {"rhs", c.rhs.str()},
          {"margin", c.margin.str()}, {"samples", c.samples}};
}

ordered config_to(const PotentialConfig& c) {
  ordered j = {{"variant", variant_name(c.variant)}, {"lambda", c.lambda.str()}};
  if (c.variant == PotentialVariant::kCnn) {
    j["alpha"] = c.alpha.str();
    j["gamma"] = c.gamma.str();
  } else {
    j["mu"] = c.mu.str();
    j["eta"] = c.eta.str();
    j["beta"] = c.beta.str();
    j["kappa"] = c.kappa.str();
  }
  j["c1"] = c.c1.str();
  j["c2"] = c.c2.str();
  j["c3"] = c.c3.str();
  j["c4"] = c.c4.str();
  j["c5"] = c.c5.str();
  return j;
}

ordered instance_to(const Instance& inst) {
  ordered reqs = ordered::array();
  for (const auto& r : inst.requests) reqs.push_back(point_to(r));
  return {{"spaceX", space_to(inst.space_x)},
          {"spaceY", space_to(inst.space_y)},
          {"origin", point_to(inst.origin)},
          {"requests", std::move(reqs)}};
}

std::string approx(const std::optional<Rational>& v) {
  if (!v) return "";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v->to_double());
  return buf;
}

std::string exact(const std::optional<Rational>& v) { return v ? v->str() : ""; }

}  // namespace

Instance instance_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorCode::kParse, std::string("instance JSON: ") + e.what());
  }
  try {
    Instance inst;
    if (j.contains("spaceX")) inst.space_x = space_from(j["spaceX"]);
    if (j.contains("spaceY")) inst.space_y = space_from(j["spaceY"]);
    auto point = [&](const json& p) -> std::pair<SpacePoint, SpacePoint> {
      if (!p.is_array() || p.size() != 2) fail(ErrorCode::kParse, "point must be [x, y], got " + p.dump());
      return {coord_from(inst.space_x, p[0]), coord_from(inst.space_y, p[1])};
    };
    if (j.contains("origin")) {
      auto [x, y] = point(j["origin"]);
      inst.origin = {x, y};
    } else {
      inst.origin = {inst.space_x.line_like() ? SpacePoint::real(0) : SpacePoint::index(0),
                     inst.space_y.line_like() ? SpacePoint::real(0) : SpacePoint::index(0)};
    }
    for (const auto& r : j.value("requests", json::array())) {
      auto [x, y] = point(r);
      inst.requests.push_back({x, y});
    }
    inst.validate();
    return inst;
  } catch (const json::exception& e) {
    fail(ErrorCode::kParse, std::string("instance JSON: ") + e.what());
  }
}

std::string instance_to_json(const Instance& instance) { return instance_to(instance).dump(); }

std::string trace_to_jsonl(const RunTrace& trace, const Instance& instance) {
  std::string out;
  ordered head = {{"type", "run"}, {"algorithm", trace.algorithm.name()}, {"instance", instance_to(instance)}};
  head["potential"] = trace.potential ? config_to(*trace.potential) : ordered(nullptr);
  out += head.dump() + "\n";
  for (const auto& s : trace.steps) {
    ordered j = {{"type", "step"},
                 {"index", s.index},
                 {"request", point_to(s.request)},
                 {"positionBefore", point_to(s.position_before)},
                 {"positionAfter", point_to(s.position_after)},
                 {"moveCost", s.move_cost.str()},
                 {"tie", s.tie},
                 {"nabla", opt_rational(s.nabla)},
                 {"nablaWitness", s.nabla_witness ? point_to(*s.nabla_witness) : ordered(nullptr)},
                 {"deltaX", s.delta_x.str()},
                 {"deltaY", s.delta_y.str()},
                 {"phiBefore", opt_rational(s.phi_before)},
                 {"phiAfter", opt_rational(s.phi_after)}};
    if (s.report) {
      const LemmaReport& r = *s.report;
      ordered checks = ordered::array();
      for (const auto& c : r.checks) checks.push_back(check_to(c));
      j["report"] = {{"caseA", r.case_a},
                     {"increaseRatio", opt_rational(r.increase_ratio)},
                     {"probeGRatio", opt_rational(r.probe_g_ratio)},
                     {"probeNablaRatio", opt_rational(r.probe_nabla_ratio)},
                     {"before", summary_to(r.before)},
                     {"after", summary_to(r.after)},
                     {"failures", r.failures()},
                     {"checks", std::move(checks)}};
    }
    if (s.work) {
      ordered pts = ordered::array();
      ordered vals = ordered::array();
      for (const auto& [p, v] : *s.work) {
        pts.push_back(point_to(p));
        vals.push_back(v.str());
      }
      j["work"] = {{"points", std::move(pts)}, {"values", std::move(vals)}};
    }
    out += j.dump() + "\n";
  }
  ordered checks = ordered::array();
  for (const auto& c : trace.run_checks) checks.push_back(check_to(c));
  ordered tail = {{"type", "summary"},
                  {"totalCost", trace.total_cost.str()},
                  {"optCost", trace.opt_cost.str()},
                  {"ratio", opt_rational(trace.ratio)},
                  {"nablaTotal", opt_rational(trace.nabla_total)},
                  {"finalPosition", point_to(trace.final_position)},
                  {"finalWork", trace.final_work.str()},
                  {"minPhiIncreaseOverNabla", opt_rational(trace.min_phi_increase_over_nabla)},
                  {"certifiedRatio", opt_rational(trace.certified_ratio)},
                  {"ties", trace.tie_count()},
                  {"lemmaFailures", trace.lemma_failures()},
                  {"checks", std::move(checks)}};
  out += tail.dump() + "\n";
  return out;
}

std::string summary_csv_header() {
  return "generator,seed,algorithm,lambda,n,algCost,optCost,ratio,nablaTotal,nablaOverOpt,"
         "minPhiIncreaseOverNabla,lemmaFailures,ratioApprox";
}

std::string summary_csv_row(const SummaryRow& row) {
  const RunTrace& t = *row.trace;
  std::optional<Rational> lambda;
  if (t.algorithm.is_wfa()) lambda = t.algorithm.lambda;
  std::optional<Rational> over;
  if (t.nabla_total && t.opt_cost.sign() > 0) over = *t.nabla_total / t.opt_cost;
  std::string s = row.generator + "," + std::to_string(row.seed) + "," + t.algorithm.name() + "," +
                  exact(lambda) + "," + std::to_string(row.n) + "," + t.total_cost.str() + "," +
                  t.opt_cost.str() + "," + exact(t.ratio) + "," + exact(t.nabla_total) + "," + exact(over) +
                  "," + exact(t.min_phi_increase_over_nabla) + "," + std::to_string(t.lemma_failures()) + "," +
                  approx(t.ratio);
  return s;
}

}  // namespace wfalab
