#ifndef WFALAB_WFALAB_H
#define WFALAB_WFALAB_H

/* C interface of the work-function lab. Objects are opaque handles owned by
 * the caller and released with the matching _free function. Every call
 * returns a status; on failure wfalab_last_error() describes it (the text
 * is per thread and valid until the next failing call on that thread).
 *
 * Exact numbers cross the boundary as text: "p" or "p/q". Text results are
 * copied into caller buffers: *needed receives the size including the
 * terminating NUL, and WFALAB_BUFFER_TOO_SMALL is returned when cap is
 * smaller (buf may then be NULL). */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define WFALAB_API __declspec(dllexport)
#else
#define WFALAB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum wfalab_status {
  WFALAB_OK = 0,
  WFALAB_INVALID_ARGUMENT = 1,
  WFALAB_DOMAIN = 2,
  WFALAB_OVERFLOW = 3,
  WFALAB_PARSE = 4,
  WFALAB_IO = 5,
  WFALAB_PRECONDITION = 6,
  WFALAB_GUARD = 7,
  WFALAB_UNBOUNDED = 8,
  WFALAB_INTERNAL = 9,
  WFALAB_BUFFER_TOO_SMALL = 100
} wfalab_status;

typedef struct wfalab_instance wfalab_instance;
typedef struct wfalab_trace wfalab_trace;

WFALAB_API const char* wfalab_version(void);
WFALAB_API const char* wfalab_status_name(wfalab_status status);
WFALAB_API const char* wfalab_last_error(void);

/* Instances: JSON text ({"spaceX":..,"spaceY":..,"origin":[x,y],"requests":[[x,y],..]}),
 * the path example (origin (0,0), requests (i,2) for i = 1..m), or a
 * generator description such as {"kind":"uniform_random","n":8,"range":8}. */
WFALAB_API wfalab_status wfalab_instance_from_json(const char* json, wfalab_instance** out);
WFALAB_API wfalab_status wfalab_instance_paper_example(size_t m, wfalab_instance** out);
WFALAB_API wfalab_status wfalab_instance_generate(const char* generator_json, uint64_t seed,
                                                  wfalab_instance** out);
WFALAB_API size_t wfalab_instance_request_count(const wfalab_instance* instance);
WFALAB_API wfalab_status wfalab_instance_to_json(const wfalab_instance* instance, char* buf, size_t cap,
                                                 size_t* needed);
WFALAB_API void wfalab_instance_free(wfalab_instance* instance);

typedef struct wfalab_run_options {
  int verify;  /* check the potential inequalities (WFA with lambda < 1) */
  int audit;   /* also search refined candidates for lower minima */
  int probe;   /* perturbation probe of the Lipschitz bounds */
  /* NULL for default constants, else e.g. {"variant":"cnn","alpha":"1/28"} */
  const char* potential_json;
} wfalab_run_options;

/* algorithm: "wfa:<lambda>" (e.g. "wfa:1/2"), "greedy" or "retrospective".
 * options may be NULL (no verification). */
WFALAB_API wfalab_status wfalab_run(const wfalab_instance* instance, const char* algorithm,
                                    const wfalab_run_options* options, wfalab_trace** out);

/* field: "totalCost", "optCost", "ratio", "nablaTotal", "finalWork",
 * "minPhiIncreaseOverNabla", "certifiedRatio". Missing values (no ratio
 * when opt is 0, no potential fields without verification) give "". */
WFALAB_API wfalab_status wfalab_trace_value(const wfalab_trace* trace, const char* field, char* buf,
                                            size_t cap, size_t* needed);
WFALAB_API size_t wfalab_trace_step_count(const wfalab_trace* trace);
WFALAB_API size_t wfalab_trace_lemma_failures(const wfalab_trace* trace);
WFALAB_API size_t wfalab_trace_tie_count(const wfalab_trace* trace);
/* The full trace as JSON lines. */
WFALAB_API wfalab_status wfalab_trace_jsonl(const wfalab_trace* trace, char* buf, size_t cap, size_t* needed);
WFALAB_API void wfalab_trace_free(wfalab_trace* trace);

typedef struct wfalab_experiment_overrides {
  const char* out_dir; /* NULL keeps the config's */
  int has_seed;
  uint64_t seed;
  size_t jobs;         /* 0 keeps the config's */
  int force_verify;
  int force_audit;
} wfalab_experiment_overrides;

typedef struct wfalab_experiment_summary {
  int exit_status; /* 0 clean, 2 lemma failure, 3 oracle disagreement */
  size_t rows;
  size_t lemma_failures;
  size_t oracle_disagreements;
  size_t ties;
} wfalab_experiment_summary;

/* Called once per problem found, in deterministic order. */
typedef void (*wfalab_note_fn)(const char* line, void* user);

/* Runs a batch from a config file (or JSON text) and writes summary.csv and
 * traces/ under the output directory. overrides and note may be NULL. */
WFALAB_API wfalab_status wfalab_experiment_run(const char* config_path, const wfalab_experiment_overrides* overrides,
                                               wfalab_experiment_summary* summary, wfalab_note_fn note,
                                               void* user);
WFALAB_API wfalab_status wfalab_experiment_run_json(const char* config_json,
                                                    const wfalab_experiment_overrides* overrides,
                                                    wfalab_experiment_summary* summary, wfalab_note_fn note,
                                                    void* user);

#ifdef __cplusplus
}
#endif

#endif
