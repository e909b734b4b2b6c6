#include "wfalab/wfalab.h"

#include <cstring>
#include <exception>
#include <memory>
#include <new>
#include <string>

#include "error.hpp"
#include "harness.hpp"
#include "serialize.hpp"

struct wfalab_instance {
  std::shared_ptr<const wfalab::Instance> inst;
};

struct wfalab_trace {
  wfalab::RunTrace trace;
  std::shared_ptr<const wfalab::Instance> inst;
};

namespace {

thread_local std::string last_error;

wfalab_status to_status(wfalab::ErrorCode code) { return static_cast<wfalab_status>(static_cast<int>(code)); }

// Runs body, turning exceptions into a status and the thread's error text.
template <class F>
wfalab_status guarded(F&& body) {
  try {
    body();
    return WFALAB_OK;
  } catch (const wfalab::Error& e) {
    last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return WFALAB_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return WFALAB_INTERNAL;
  } catch (...) {
    last_error = "unknown failure";
    return WFALAB_INTERNAL;
  }
}

wfalab_status null_argument(const char* what) {
  last_error = std::string("null argument: ") + what;
  return WFALAB_INVALID_ARGUMENT;
}

wfalab_status copy_out(const std::string& text, char* buf, size_t cap, size_t* needed) {
  if (needed) *needed = text.size() + 1;
  if (!buf || cap < text.size() + 1) {
    last_error = "buffer of " + std::to_string(cap) + " bytes, need " + std::to_string(text.size() + 1);
    return WFALAB_BUFFER_TOO_SMALL;
  }
  std::memcpy(buf, text.c_str(), text.size() + 1);
  return WFALAB_OK;
}

wfalab_status new_instance(wfalab::Instance inst, wfalab_instance** out) {
  *out = new wfalab_instance{std::make_shared<const wfalab::Instance>(std::move(inst))};
  return WFALAB_OK;
}

void apply_overrides(wfalab::ExperimentConfig& cfg, const wfalab_experiment_overrides* ov) {
  if (!ov) return;
  if (ov->out_dir) cfg.out_dir = ov->out_dir;
  if (ov->has_seed) cfg.seed = ov->seed;
  if (ov->jobs > 0) cfg.jobs = ov->jobs;
  if (ov->force_verify) cfg.verify = true;
  if (ov->force_audit) cfg.audit = true;
}

wfalab_status run_config(wfalab::ExperimentConfig cfg, const wfalab_experiment_overrides* overrides,
                         wfalab_experiment_summary* summary, wfalab_note_fn note, void* user) {
  apply_overrides(cfg, overrides);
  const wfalab::ExperimentResult r = wfalab::run_experiment(cfg);
  if (summary) {
    summary->exit_status = r.exit_status;
    summary->rows = r.rows;
    summary->lemma_failures = r.lemma_failures;
    summary->oracle_disagreements = r.oracle_disagreements;
    summary->ties = r.ties;
  }
  if (note) {
    for (const auto& line : r.notes) note(line.c_str(), user);
  }
  return WFALAB_OK;
}

}  // namespace

extern "C" {

const char* wfalab_version(void) { return "0.1.0"; }

const char* wfalab_status_name(wfalab_status status) {
  switch (status) {
    case WFALAB_OK: return "ok";
    case WFALAB_BUFFER_TOO_SMALL: return "buffer_too_small";
    default: break;
  }
  const int code = static_cast<int>(status);
  if (code >= 1 && code <= 9) return wfalab::error_code_name(static_cast<wfalab::ErrorCode>(code));
  return "unknown";
}

const char* wfalab_last_error(void) { return last_error.c_str(); }

wfalab_status wfalab_instance_from_json(const char* json, wfalab_instance** out) {
  if (!json) return null_argument("json");
  if (!out) return null_argument("out");
  *out = nullptr;
  return guarded([&] { new_instance(wfalab::instance_from_json(json), out); });
}

wfalab_status wfalab_instance_paper_example(size_t m, wfalab_instance** out) {
  if (!out) return null_argument("out");
  *out = nullptr;
  return guarded([&] { new_instance(wfalab::generate(wfalab::GeneratorSpec::paper_example(m), 0), out); });
}

wfalab_status wfalab_instance_generate(const char* generator_json, uint64_t seed, wfalab_instance** out) {
  if (!generator_json) return null_argument("generator_json");
  if (!out) return null_argument("out");
  *out = nullptr;
  return guarded([&] { new_instance(wfalab::generate(wfalab::parse_generator_spec(generator_json), seed), out); });
}

size_t wfalab_instance_request_count(const wfalab_instance* instance) {
  return instance ? instance->inst->requests.size() : 0;
}

wfalab_status wfalab_instance_to_json(const wfalab_instance* instance, char* buf, size_t cap, size_t* needed) {
  if (!instance) return null_argument("instance");
  wfalab_status st = WFALAB_OK;
  const wfalab_status g = guarded([&] { st = copy_out(wfalab::instance_to_json(*instance->inst), buf, cap, needed); });
  return g != WFALAB_OK ? g : st;
}

void wfalab_instance_free(wfalab_instance* instance) { delete instance; }

wfalab_status wfalab_run(const wfalab_instance* instance, const char* algorithm, const wfalab_run_options* options,
                         wfalab_trace** out) {
  if (!instance) return null_argument("instance");
  if (!algorithm) return null_argument("algorithm");
  if (!out) return null_argument("out");
  *out = nullptr;
  return guarded([&] {
    const wfalab::AlgorithmConfig alg = wfalab::AlgorithmConfig::parse(algorithm);
    wfalab::RunOptions opt;
    if (options) {
      opt.verify = options->verify != 0;
      opt.audit = options->audit != 0;
      opt.probe = options->probe != 0;
      if (opt.verify && alg.is_wfa() && alg.lambda < 1) {
        wfalab::PotentialChoice choice;
        if (options->potential_json) choice = wfalab::parse_potential_choice(options->potential_json);
        opt.potential = choice.resolve(alg.lambda, *instance->inst);
      }
    }
    auto t = std::make_unique<wfalab_trace>();
    t->trace = wfalab::run(instance->inst, alg, opt);
    t->inst = instance->inst;
    *out = t.release();
  });
}

wfalab_status wfalab_trace_value(const wfalab_trace* trace, const char* field, char* buf, size_t cap,
                                 size_t* needed) {
  if (!trace) return null_argument("trace");
  if (!field) return null_argument("field");
  const wfalab::RunTrace& t = trace->trace;
  auto text = [](const std::optional<wfalab::Rational>& v) { return v ? v->str() : std::string(); };
  const std::string f = field;
  std::string value;
  if (f == "totalCost") {
    value = t.total_cost.str();
  } else if (f == "optCost") {
    value = t.opt_cost.str();
  } else if (f == "ratio") {
    value = text(t.ratio);
  } else if (f == "nablaTotal") {
    value = text(t.nabla_total);
  } else if (f == "finalWork") {
    value = t.final_work.str();
  } else if (f == "minPhiIncreaseOverNabla") {
    value = text(t.min_phi_increase_over_nabla);
  } else if (f == "certifiedRatio") {
    value = text(t.certified_ratio);
  } else {
    last_error = "unknown trace field '" + f + "'";
    return WFALAB_INVALID_ARGUMENT;
  }
  return copy_out(value, buf, cap, needed);
}

size_t wfalab_trace_step_count(const wfalab_trace* trace) { return trace ? trace->trace.steps.size() : 0; }

size_t wfalab_trace_lemma_failures(const wfalab_trace* trace) { return trace ? trace->trace.lemma_failures() : 0; }

size_t wfalab_trace_tie_count(const wfalab_trace* trace) { return trace ? trace->trace.tie_count() : 0; }

wfalab_status wfalab_trace_jsonl(const wfalab_trace* trace, char* buf, size_t cap, size_t* needed) {
  if (!trace) return null_argument("trace");
  wfalab_status st = WFALAB_OK;
  const wfalab_status g =
      guarded([&] { st = copy_out(wfalab::trace_to_jsonl(trace->trace, *trace->inst), buf, cap, needed); });
  return g != WFALAB_OK ? g : st;
}

void wfalab_trace_free(wfalab_trace* trace) { delete trace; }

wfalab_status wfalab_experiment_run(const char* config_path, const wfalab_experiment_overrides* overrides,
                                    wfalab_experiment_summary* summary, wfalab_note_fn note, void* user) {
  if (!config_path) return null_argument("config_path");
  wfalab_status st = WFALAB_OK;
  const wfalab_status g = guarded(
      [&] { st = run_config(wfalab::load_experiment_config(config_path), overrides, summary, note, user); });
  return g != WFALAB_OK ? g : st;
}

wfalab_status wfalab_experiment_run_json(const char* config_json, const wfalab_experiment_overrides* overrides,
                                         wfalab_experiment_summary* summary, wfalab_note_fn note, void* user) {
  if (!config_json) return null_argument("config_json");
  wfalab_status st = WFALAB_OK;
  const wfalab_status g = guarded(
      [&] { st = run_config(wfalab::parse_experiment_config(config_json), overrides, summary, note, user); });
  return g != WFALAB_OK ? g : st;
}

}  // extern "C"
