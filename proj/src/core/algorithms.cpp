#include "algorithms.hpp"

#include "error.hpp"

namespace wfalab {

AlgorithmConfig AlgorithmConfig::wfa(Rational lambda) {
  if (lambda.sign() <= 0 || lambda > 1) {
    fail(ErrorCode::kInvalidArgument, "WFA lambda must lie in (0,1], got " + lambda.str());
  }
  return {Kind::kWfa, std::move(lambda)};
}

std::string AlgorithmConfig::name() const {
  switch (kind) {
    case Kind::kWfa:
      return "wfa:" + lambda.str();
    case Kind::kGreedy:
      return "greedy";
    case Kind::kRetrospective:
      return "retrospective";
  }
  return "?";
}

AlgorithmConfig AlgorithmConfig::parse(std::string_view text) {
  if (text == "greedy") return greedy();
  if (text == "retrospective") return retrospective();
  if (text.starts_with("wfa:")) return wfa(Rational::parse(text.substr(4)));
  if (text == "wfa") return wfa(1);
  fail(ErrorCode::kParse, "unknown algorithm '" + std::string(text) +
                              "' (expected wfa:<lambda>, greedy or retrospective)");
}

std::size_t RunTrace::lemma_failures() const {
  std::size_t n = 0;
  for (const auto& s : steps) n += s.report ? s.report->failures() : 0;
  for (const auto& c : run_checks) n += (c.applicable && !c.holds) ? 1 : 0;
  return n;
}

std::size_t RunTrace::tie_count() const {
  std::size_t n = 0;
  for (const auto& s : steps) n += s.tie ? 1 : 0;
  return n;
}

WfaMove wfa_step(const WorkFunction& after, const ProductPoint& current, const RequestPoint& r,
                 const Rational& lambda) {
  std::vector<ProductPoint> cands = grid_points_on(after.grid(), r);
  cands.push_back({r.x, current.y});
  cands.push_back({current.x, r.y});
  std::optional<Rational> best_value;
  std::optional<Rational> best_dist;
  ProductPoint best;
  std::vector<ProductPoint> at_min;
  for (const auto& t : cands) {
    Rational d = after.distance(current, t);
    Rational v = after.evaluate(t) + lambda * d;
    if (!best_value || v < *best_value) {
      best_value = std::move(v);
      best_dist = std::move(d);
      best = t;
      at_min.assign(1, t);
    } else if (v == *best_value) {
      at_min.push_back(t);
      if (d < *best_dist || (d == *best_dist && t < best)) {
        best_dist = std::move(d);
        best = t;
      }
    }
  }
  bool tie = false;
  for (const auto& t : at_min) tie = tie || t != best;
  return {best, tie};
}

ProductPoint greedy_step(const Instance& instance, const ProductPoint& current, const RequestPoint& r) {
  const Rational dx = instance.space_x.distance(current.x, r.x);
  const Rational dy = instance.space_y.distance(current.y, r.y);
  if (dy < dx) return {current.x, r.y};
  return {r.x, current.y};
}

ProductPoint retrospective_step(const WorkFunction& after, const RequestPoint& r) {
  const auto cands = points_on(after.instance(), after.grid(), r, true);
  std::optional<Rational> best_value;
  ProductPoint best;
  for (const auto& t : cands) {  // sorted, so the first minimum is the smallest point
    Rational v = after.evaluate(t);
    if (!best_value || v < *best_value) {
      best_value = std::move(v);
      best = t;
    }
  }
  return best;
}

namespace {

LemmaCheck run_check(std::string name, std::string relation, const Rational& lhs, const Rational& rhs) {
  LemmaCheck c;
  c.name = std::move(name);
  c.relation = relation;
  c.lhs = lhs;
  c.rhs = rhs;
  c.samples = 1;
  if (relation == "==") {
    c.margin = -(lhs - rhs).abs();
    c.holds = c.margin.is_zero();
  } else {
    c.margin = relation == "<=" ? rhs - lhs : lhs - rhs;
    c.holds = c.margin.sign() >= 0;
  }
  return c;
}

}  // namespace

RunTrace run(std::shared_ptr<const Instance> instance, const AlgorithmConfig& algorithm,
             const RunOptions& options) {
  WorkFunction wf = WorkFunction::initial(std::move(instance));
  const Instance& inst = wf.instance();
  const bool is_wfa = algorithm.is_wfa();
  const Rational& lambda = algorithm.lambda;
  const bool verify = options.verify && is_wfa && lambda < 1;

  RunTrace trace;
  trace.algorithm = algorithm;
  if (is_wfa) trace.nabla_total = Rational(0);

  std::optional<PotentialConfig> cfg;
  if (verify) {
    cfg = options.potential ? *options.potential : default_constants(lambda, auto_variant(inst));
    if (cfg->lambda != lambda) {
      fail(ErrorCode::kInvalidArgument, "potential lambda " + cfg->lambda.str() +
                                            " differs from the algorithm's " + lambda.str());
    }
    validate(*cfg);
    check_compatible(*cfg, inst);
    trace.potential = cfg;
  }

  VerifyOptions vopt;
  vopt.audit = options.audit;
  vopt.probe = options.probe;
  std::optional<PotentialSummary> carried;
  if (verify) carried = summarize(wf, *cfg);
  const std::optional<Rational> phi_initial = carried ? std::optional(carried->phi) : std::nullopt;

  ProductPoint pos = inst.origin;
  for (std::size_t i = 0; i < inst.requests.size(); ++i) {
    const RequestPoint& r = inst.requests[i];
    StepRecord rec;
    rec.index = i + 1;
    rec.request = r;
    rec.position_before = pos;
    const RequestPoint prev = wf.support_request();
    rec.delta_x = inst.space_x.distance(prev.x, r.x);
    rec.delta_y = inst.space_y.distance(prev.y, r.y);
    if (is_wfa) {
      // Measured before the update, against the work function that ends at the previous request.
      ExtendedCost ext = extended_cost(wf, r, lambda);
      rec.nabla = ext.value;
      rec.nabla_witness = ext.witness;
      *trace.nabla_total += ext.value;
    }
    WorkFunction next = wf.update(r);
    switch (algorithm.kind) {
      case AlgorithmConfig::Kind::kWfa: {
        const WfaMove m = wfa_step(next, pos, r, lambda);
        rec.position_after = m.point;
        rec.tie = m.tie;
        break;
      }
      case AlgorithmConfig::Kind::kGreedy:
        rec.position_after = greedy_step(inst, pos, r);
        break;
      case AlgorithmConfig::Kind::kRetrospective:
        rec.position_after = retrospective_step(next, r);
        break;
    }
    if ((!is_wfa || lambda < 1) && !serves(rec.position_after, r)) {
      fail(ErrorCode::kInternal, algorithm.name() + " left request " + std::to_string(i + 1) + " unserved");
    }
    rec.move_cost = inst.distance(pos, rec.position_after);
    trace.total_cost += rec.move_cost;
    if (verify) {
      vopt.before = &*carried;
      LemmaReport rep = verify_step(wf, next, r, *cfg, vopt);
      rec.phi_before = rep.before.phi;
      rec.phi_after = rep.after.phi;
      if (rep.increase_ratio &&
          (!trace.min_phi_increase_over_nabla || *rep.increase_ratio < *trace.min_phi_increase_over_nabla)) {
        trace.min_phi_increase_over_nabla = *rep.increase_ratio;
      }
      carried = rep.after;
      rec.report = std::move(rep);
    }
    if (options.record_work) rec.work = next.grid_values();
    pos = rec.position_after;
    wf = std::move(next);
    trace.steps.push_back(std::move(rec));
  }

  trace.final_position = pos;
  trace.final_work = wf.evaluate(pos);
  trace.opt_cost = opt_cost(wf);
  if (trace.opt_cost.sign() > 0) trace.ratio = trace.total_cost / trace.opt_cost;

  if (is_wfa) {
    // Telescoping the per-step movement bound; the initial work function is 0 at the origin.
    trace.run_checks.push_back(run_check("cost_accounting", "<=", trace.total_cost,
                                         (*trace.nabla_total - trace.final_work) / lambda));
  }
  if (verify) {
    trace.run_checks.push_back(run_check("phi_initial_zero", "==", *phi_initial, 0));
    trace.run_checks.push_back(run_check("phi_final_le_opt", "<=", carried->phi, trace.opt_cost));
    trace.run_checks.push_back(
        run_check("nabla_total_bound", "<=", cfg->c5 * *trace.nabla_total, trace.opt_cost));
    trace.certified_ratio = (Rational(1) / cfg->c5 - 1) / lambda;
  }
  return trace;
}

}  // namespace wfalab
