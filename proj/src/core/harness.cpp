#include "harness.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "error.hpp"
#include "offline.hpp"
#include "serialize.hpp"

namespace wfalab {

using nlohmann::json;

GeneratorSpec GeneratorSpec::paper_example(std::size_t m) {
  GeneratorSpec s;
  s.kind = Kind::kPaperExample;
  s.m = m;
  return s;
}

GeneratorSpec GeneratorSpec::uniform_random(std::size_t n, Rational range) {
  GeneratorSpec s;
  s.kind = Kind::kUniformRandom;
  s.n = n;
  s.range = std::move(range);
  return s;
}

GeneratorSpec GeneratorSpec::random_walk(std::size_t n, Rational step_range) {
  GeneratorSpec s;
  s.kind = Kind::kRandomWalk;
  s.n = n;
  s.step_range = std::move(step_range);
  return s;
}

GeneratorSpec GeneratorSpec::orthogonal(std::size_t n, Rational range) {
  GeneratorSpec s;
  s.kind = Kind::kOrthogonal;
  s.n = n;
  s.range = std::move(range);
  return s;
}

GeneratorSpec GeneratorSpec::finite_uniform(std::size_t k, std::size_t n) {
  GeneratorSpec s;
  s.kind = Kind::kFiniteUniform;
  s.k = k;
  s.n = n;
  return s;
}

GeneratorSpec GeneratorSpec::weighted_line(Rational wx, Rational wy, std::size_t n, Rational range) {
  GeneratorSpec s;
  s.kind = Kind::kWeightedLine;
  s.weight_x = std::move(wx);
  s.weight_y = std::move(wy);
  s.n = n;
  s.range = std::move(range);
  return s;
}

std::string GeneratorSpec::name() const {
  switch (kind) {
    case Kind::kPaperExample: return "paper_example";
    case Kind::kUniformRandom: return "uniform_random";
    case Kind::kRandomWalk: return "random_walk";
    case Kind::kOrthogonal: return "orthogonal";
    case Kind::kFiniteUniform: return "finite_uniform";
    case Kind::kWeightedLine: return "weighted_line";
    case Kind::kFixed: return "fixed";
  }
  return "?";
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Uniform over multiples of 1/4 in [lo, hi]. Avoids the distribution classes,
// whose output is library dependent.
class QuarterSource {
 public:
  explicit QuarterSource(std::uint64_t seed) : rng_(splitmix64(seed)) {}

  std::uint64_t below(std::uint64_t bound) {
    // Rejection keeps the draw unbiased.
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t v;
    do v = rng_(); while (v >= limit);
    return v % bound;
  }

  Rational between(const Rational& lo, const Rational& hi) {
    const std::int64_t a = ceil(lo * 4);
    const std::int64_t b = -ceil(-(hi * 4));
    if (b < a) fail(ErrorCode::kInvalidArgument, "empty coordinate range");
    return Rational(a + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(b - a) + 1)), 4);
  }

 private:
  std::mt19937_64 rng_;
};

void require_positive(bool ok, const std::string& what) {
  if (!ok) fail(ErrorCode::kInvalidArgument, "generator parameter " + what + " must be positive");
}

}  // namespace

Instance generate(const GeneratorSpec& spec, std::uint64_t seed) {
  using Kind = GeneratorSpec::Kind;
  Instance inst;
  inst.origin = real_point(0, 0);
  QuarterSource src(seed);
  auto real = [](Rational v) { return SpacePoint::real(std::move(v)); };
  switch (spec.kind) {
    case Kind::kPaperExample:
      require_positive(spec.m > 0, "m");
      for (std::size_t i = 1; i <= spec.m; ++i) inst.requests.push_back({real(static_cast<std::int64_t>(i)), real(2)});
      break;
    case Kind::kUniformRandom:
    case Kind::kWeightedLine:
      require_positive(spec.n > 0, "n");
      require_positive(spec.range.sign() > 0, "range");
      if (spec.kind == Kind::kWeightedLine) {
        require_positive(spec.weight_x.sign() > 0 && spec.weight_y.sign() > 0, "weight");
        inst.space_x = MetricSpace::scaled(MetricSpace::real_line(), spec.weight_x);
        inst.space_y = MetricSpace::scaled(MetricSpace::real_line(), spec.weight_y);
      }
      for (std::size_t i = 0; i < spec.n; ++i) {
        Rational x = src.between(-spec.range, spec.range);
        Rational y = src.between(-spec.range, spec.range);
        inst.requests.push_back({real(std::move(x)), real(std::move(y))});
      }
      break;
    case Kind::kRandomWalk: {
      require_positive(spec.n > 0, "n");
      require_positive(spec.step_range.sign() > 0, "step_range");
      Rational x(0), y(0);
      for (std::size_t i = 0; i < spec.n; ++i) {
        x += src.between(-spec.step_range, spec.step_range);
        y += src.between(-spec.step_range, spec.step_range);
        inst.requests.push_back({real(x), real(y)});
      }
      break;
    }
    case Kind::kOrthogonal: {
      require_positive(spec.n > 0, "n");
      require_positive(spec.range.sign() > 0, "range");
      // Odd requests keep the previous x, even ones the previous y.
      Rational x(0), y(0);
      for (std::size_t i = 0; i < spec.n; ++i) {
        if (i % 2 == 0) {
          y = src.between(-spec.range, spec.range);
        } else {
          x = src.between(-spec.range, spec.range);
        }
        inst.requests.push_back({real(x), real(y)});
      }
      break;
    }
    case Kind::kFiniteUniform:
      require_positive(spec.n > 0, "n");
      require_positive(spec.k > 1, "k - 1");
      inst.space_x = MetricSpace::uniform(spec.k);
      inst.space_y = MetricSpace::uniform(spec.k);
      inst.origin = {SpacePoint::index(0), SpacePoint::index(0)};
      for (std::size_t i = 0; i < spec.n; ++i) {
        const std::size_t a = src.below(spec.k);
        const std::size_t b = src.below(spec.k);
        inst.requests.push_back({SpacePoint::index(a), SpacePoint::index(b)});
      }
      break;
    case Kind::kFixed:
      if (!spec.fixed) fail(ErrorCode::kInvalidArgument, "fixed generator without an instance");
      inst = *spec.fixed;
      break;
  }
  inst.validate();
  return inst;
}

PotentialConfig PotentialChoice::resolve(const Rational& lambda, const Instance& instance) const {
  PotentialVariant v;
  if (variant == "auto") {
    v = auto_variant(instance);
  } else if (variant == "cnn") {
    v = PotentialVariant::kCnn;
  } else if (variant == "general") {
    v = PotentialVariant::kGeneral;
  } else {
    fail(ErrorCode::kInvalidArgument, "unknown potential variant '" + variant + "'");
  }
  PotentialConfig cfg = default_constants(lambda, v);
  if (v == PotentialVariant::kCnn) {
    if (alpha || gamma) cfg = make_cnn_config(lambda, alpha.value_or(cfg.alpha), gamma);
  } else if (mu || eta || beta || kappa) {
    cfg = make_general_config(lambda, mu.value_or(cfg.mu), eta.value_or(cfg.eta), beta.value_or(cfg.beta), kappa);
  }
  validate(cfg);
  return cfg;
}

namespace {

Rational rational_field(const json& j, const char* key) {
  const json& v = j.at(key);
  if (v.is_string()) return Rational::parse(v.get<std::string>());
  if (v.is_number_integer()) return Rational(v.get<std::int64_t>());
  if (v.is_number_float()) return Rational::parse(v.dump());
  fail(ErrorCode::kParse, std::string("field ") + key + " must be a rational");
}

std::size_t count_field(const json& j, const char* key) {
  const json& v = j.at(key);
  if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
    fail(ErrorCode::kParse, std::string("field ") + key + " must be a non-negative integer");
  }
  return v.get<std::size_t>();
}

GeneratorSpec generator_from(const json& g) {
  const std::string kind = g.at("kind").get<std::string>();
  auto rational_or = [&](const char* key, Rational def) { return g.contains(key) ? rational_field(g, key) : def; };
  if (kind == "paper_example") return GeneratorSpec::paper_example(count_field(g, "m"));
  if (kind == "uniform_random") return GeneratorSpec::uniform_random(count_field(g, "n"), rational_or("range", 8));
  if (kind == "random_walk") return GeneratorSpec::random_walk(count_field(g, "n"), rational_or("step_range", 2));
  if (kind == "orthogonal") return GeneratorSpec::orthogonal(count_field(g, "n"), rational_or("range", 8));
  if (kind == "finite_uniform") return GeneratorSpec::finite_uniform(count_field(g, "k"), count_field(g, "n"));
  if (kind == "weighted_line") {
    return GeneratorSpec::weighted_line(rational_or("weight_x", 1), rational_or("weight_y", 1), count_field(g, "n"),
                                        rational_or("range", 8));
  }
  if (kind == "fixed") {
    GeneratorSpec s;
    s.kind = GeneratorSpec::Kind::kFixed;
    s.fixed = std::make_shared<const Instance>(instance_from_json(g.at("instance").dump()));
    return s;
  }
  fail(ErrorCode::kParse, "unknown generator kind '" + kind + "'");
}

PotentialChoice potential_from(const json& p) {
  PotentialChoice choice;
  if (p.is_string() && p == "default") return choice;
  if (!p.is_object()) fail(ErrorCode::kParse, "potential must be \"default\" or an object");
  choice.variant = p.value("variant", std::string("auto"));
  auto field = [&](const char* key, std::optional<Rational>& slot) {
    if (p.contains(key)) slot = rational_field(p, key);
  };
  field("alpha", choice.alpha);
  field("gamma", choice.gamma);
  field("mu", choice.mu);
  field("eta", choice.eta);
  field("beta", choice.beta);
  field("kappa", choice.kappa);
  return choice;
}

}  // namespace

PotentialChoice parse_potential_choice(const std::string& json_text) {
  try {
    return potential_from(json::parse(json_text));
  } catch (const json::exception& e) {
    fail(ErrorCode::kParse, std::string("potential: ") + e.what());
  }
}

ExperimentConfig parse_experiment_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    fail(ErrorCode::kParse, std::string("config JSON: ") + e.what());
  }
  if (!j.is_object()) fail(ErrorCode::kParse, "config must be a JSON object");
  try {
    ExperimentConfig cfg;
    cfg.generator = generator_from(j.at("generator"));
    std::vector<Rational> lambdas;
    for (const auto& l : j.value("lambdas", json::array())) {
      lambdas.push_back(l.is_string() ? Rational::parse(l.get<std::string>()) : Rational::parse(l.dump()));
    }
    for (const auto& a : j.value("algorithms", json::array({"wfa"}))) {
      const std::string name = a.get<std::string>();
      if (name == "wfa" && !lambdas.empty()) {
        for (const auto& l : lambdas) cfg.algorithms.push_back(AlgorithmConfig::wfa(l));
      } else {
        cfg.algorithms.push_back(AlgorithmConfig::parse(name));
      }
    }
    if (j.contains("trials")) cfg.trials = count_field(j, "trials");
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    cfg.out_dir = j.value("out_dir", cfg.out_dir);
    cfg.verify = j.value("verify", cfg.verify);
    cfg.audit = j.value("audit", cfg.audit);
    cfg.probe = j.value("probe", cfg.probe);
    cfg.oracle = j.value("oracle", cfg.oracle);
    cfg.dump_work = j.value("dump_work", cfg.dump_work);
    if (j.contains("jobs")) cfg.jobs = std::max<std::size_t>(1, count_field(j, "jobs"));
    if (j.contains("potential")) cfg.potential = potential_from(j["potential"]);
    return cfg;
  } catch (const json::exception& e) {
    fail(ErrorCode::kParse, std::string("config: ") + e.what());
  }
}

GeneratorSpec parse_generator_spec(const std::string& json_text) {
  try {
    return generator_from(json::parse(json_text));
  } catch (const json::exception& e) {
    fail(ErrorCode::kParse, std::string("generator: ") + e.what());
  }
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIo, "cannot read config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_experiment_config(ss.str());
}

std::string file_tag(const AlgorithmConfig& algorithm) {
  std::string s = algorithm.name();
  for (char& c : s) {
    if (c == ':') c = '-';
    if (c == '/') c = '_';
  }
  return s;
}

namespace {

// Runs tasks 0..count-1 on up to `jobs` threads. The first failure in task
// order is rethrown after all workers finish.
template <class F>
void parallel_for(std::size_t count, std::size_t jobs, F&& body) {
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < count;) {
      try {
        body(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t n = std::min(std::max<std::size_t>(jobs, 1), std::max<std::size_t>(count, 1));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < n; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

// Compares the engine with exhaustive enumeration on a short instance.
// Returns a description of the first disagreement.
std::optional<std::string> oracle_check(const std::shared_ptr<const Instance>& inst) {
  std::map<ProductPoint, Rational> ends;
  try {
    ends = brute_force_endpoints(*inst, inst->requests.size());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kGuard) return std::nullopt;
    throw;
  }
  WorkFunction wf = WorkFunction::initial(inst);
  for (const auto& r : inst->requests) wf = wf.update(r);
  Rational opt = ends.begin()->second;
  for (const auto& [p, c] : ends) opt = wfalab::min(opt, c);
  if (opt != opt_cost(wf)) return "opt " + opt_cost(wf).str() + " vs brute force " + opt.str();
  for (const auto& [g, v] : wf.grid_values()) {
    std::optional<Rational> best;
    for (const auto& [p, c] : ends) {
      Rational w = c + inst->distance(p, g);
      if (!best || w < *best) best = std::move(w);
    }
    if (*best != v) return "W" + g.str() + " = " + v.str() + " vs brute force " + best->str();
  }
  return std::nullopt;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::kIo, "cannot write " + path.string());
  out << text;
  if (!out) fail(ErrorCode::kIo, "write failed for " + path.string());
}

// One row per check name, in order of first appearance: how often it was
// evaluated, how often it failed, and its smallest margin over the batch.
std::string margins_csv(const std::vector<RunTrace>& traces) {
  struct Tally {
    std::string relation;
    std::size_t evaluated = 0;
    std::size_t failures = 0;
    std::optional<Rational> min_margin;
  };
  std::vector<std::string> order;
  std::map<std::string, Tally> tally;
  auto add = [&](const LemmaCheck& c) {
    if (!c.applicable) return;
    auto [it, fresh] = tally.try_emplace(c.name);
    if (fresh) order.push_back(c.name);
    Tally& t = it->second;
    t.relation = c.relation;
    ++t.evaluated;
    t.failures += !c.holds;
    if (!t.min_margin || c.margin < *t.min_margin) t.min_margin = c.margin;
  };
  for (const auto& tr : traces) {
    for (const auto& s : tr.steps) {
      if (!s.report) continue;
      for (const auto& c : s.report->checks) add(c);
    }
    for (const auto& c : tr.run_checks) add(c);
  }
  std::string out = "check,relation,evaluated,failures,minMargin\n";
  for (const auto& name : order) {
    const Tally& t = tally.at(name);
    out += name + "," + t.relation + "," + std::to_string(t.evaluated) + "," + std::to_string(t.failures) + "," +
           t.min_margin->str() + "\n";
  }
  return out;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config) {
  namespace fs = std::filesystem;
  const fs::path out_dir(config.out_dir);
  std::error_code ec;
  fs::create_directories(out_dir / "traces", ec);
  if (ec) fail(ErrorCode::kIo, "cannot create " + (out_dir / "traces").string() + ": " + ec.message());

  const std::size_t trials = config.trials;
  const std::size_t algs = config.algorithms.size();
  std::vector<std::shared_ptr<const Instance>> instances(trials);
  std::vector<std::uint64_t> seeds(trials);
  for (std::size_t t = 0; t < trials; ++t) {
    seeds[t] = config.seed + t;
    instances[t] = std::make_shared<const Instance>(generate(config.generator, seeds[t]));
  }

  // Oracle tasks first, then one task per (trial, algorithm).
  std::vector<std::optional<std::string>> oracle(trials);
  std::vector<RunTrace> traces(trials * algs);
  const std::size_t oracle_tasks = config.oracle ? trials : 0;
  parallel_for(oracle_tasks + trials * algs, config.jobs, [&](std::size_t i) {
    if (i < oracle_tasks) {
      oracle[i] = oracle_check(instances[i]);
      return;
    }
    const std::size_t k = i - oracle_tasks;
    const std::size_t t = k / algs;
    const AlgorithmConfig& alg = config.algorithms[k % algs];
    RunOptions opt;
    opt.verify = config.verify;
    opt.audit = config.audit;
    opt.probe = config.probe;
    opt.record_work = config.dump_work;
    if (config.verify && alg.is_wfa() && alg.lambda < 1) {
      opt.potential = config.potential.resolve(alg.lambda, *instances[t]);
    }
    traces[k] = run(instances[t], alg, opt);
  });

  ExperimentResult result;
  std::string csv = summary_csv_header() + "\n";
  for (std::size_t t = 0; t < trials; ++t) {
    if (oracle[t]) {
      ++result.oracle_disagreements;
      result.notes.push_back("trial " + std::to_string(t) + ": oracle disagreement: " + *oracle[t]);
    }
    for (std::size_t a = 0; a < algs; ++a) {
      const RunTrace& tr = traces[t * algs + a];
      csv += summary_csv_row({config.generator.name(), seeds[t], &tr, instances[t]->requests.size()}) + "\n";
      write_file(out_dir / "traces" / (std::to_string(t) + "-" + file_tag(tr.algorithm) + ".jsonl"),
                 trace_to_jsonl(tr, *instances[t]));
      ++result.rows;
      result.ties += tr.tie_count();
      const std::size_t f = tr.lemma_failures();
      result.lemma_failures += f;
      if (f > 0) {
        std::string names;
        for (const auto& s : tr.steps) {
          if (!s.report) continue;
          for (const auto& c : s.report->checks) {
            if (c.applicable && !c.holds) names += " step" + std::to_string(s.index) + ":" + c.name;
          }
        }
        for (const auto& c : tr.run_checks) {
          if (c.applicable && !c.holds) names += " run:" + c.name;
        }
        result.notes.push_back("trial " + std::to_string(t) + " " + tr.algorithm.name() + ": " +
                               std::to_string(f) + " failed checks:" + names);
      }
    }
  }
  write_file(out_dir / "summary.csv", csv);
  write_file(out_dir / "lemma_margins.csv", margins_csv(traces));
  if (result.oracle_disagreements > 0) {
    result.exit_status = 3;
  } else if (result.lemma_failures > 0) {
    result.exit_status = 2;
  }
  return result;
}

}  // namespace wfalab
