#ifndef MARCHSIM_H
#define MARCHSIM_H

/* C interface to the MBIST workbench.
 *
 * Every function returns an ms_status; on failure ms_last_error() holds a
 * message for the calling thread. Strings returned through char** are owned
 * by the caller and released with ms_string_free. Handles are released with
 * their matching *_free function; passing NULL to a free function is a no-op.
 */

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define MS_API __declspec(dllexport)
#else
#define MS_API __attribute__((visibility("default")))
#endif

typedef enum ms_status {
  MS_OK = 0,
  MS_ERR_PARSE = 1,
  MS_ERR_INVALID_ARGUMENT = 2,
  MS_ERR_OUT_OF_RANGE = 3,
  MS_ERR_UNKNOWN_NAME = 4,
  MS_ERR_IO = 5,
  MS_ERR_GUARD = 6,
  MS_ERR_CONFORMANCE = 7,
  MS_ERR_INTERNAL = 8
} ms_status;

typedef struct ms_trace ms_trace;
typedef struct ms_suite ms_suite;
typedef struct ms_stats ms_stats;

MS_API const char *ms_last_error(void);
MS_API const char *ms_status_name(ms_status status);
MS_API void ms_string_free(char *s);

/* ---- March algorithms ---- */

/* One line per built-in: "<name> <ops>" or, with notation, "<name> <ops> <text>". */
MS_API ms_status ms_list_algorithms(int with_notation, char **out);
/* `spec` is a built-in name or inline notation ("{ b(w0); ... }"). */
MS_API ms_status ms_algorithm_format(const char *spec, char **out);
MS_API ms_status ms_algorithm_op_count(const char *spec, size_t *out);
/* Nonzero when `spec` is the controller's own pass order (march_c_fsm). */
MS_API ms_status ms_algorithm_is_controller(const char *spec, int *out);
/* Generic March execution on a words x width memory (power-up content 0). */
MS_API ms_status ms_algorithm_detects(const char *spec, const char *const *faults, size_t fault_count,
                                      uint64_t words, unsigned width, int *detected);

/* ---- Simulation ---- */

typedef struct ms_config {
  unsigned c_size;
  unsigned word_width;
  unsigned post_done_edges;
} ms_config;

MS_API void ms_config_default(ms_config *config);

typedef struct ms_verdict {
  int completed;
  int any_fail;
  int has_first_fail;
  uint64_t first_fail_cycle;
  char first_fail_state[16]; /* empty when unknown */
  int has_first_fail_addr;
  uint64_t first_fail_addr;
} ms_verdict;

/* `scenario_text` may be NULL for the default run (t_mode raised at edge 2).
 * `faults` are in the text form "saf 3 0 0", "tf 2 0 fall", ... */
MS_API ms_status ms_run(const ms_config *config, const char *scenario_text, const char *const *faults,
                        size_t fault_count, ms_trace **trace, ms_verdict *verdict);
MS_API ms_status ms_verdict_format(const ms_verdict *verdict, char **out);

MS_API ms_status ms_trace_load(const char *path, ms_trace **trace);
MS_API void ms_trace_free(ms_trace *trace);
MS_API size_t ms_trace_length(const ms_trace *trace);
MS_API ms_status ms_trace_vcd(const ms_trace *trace, char **out);
MS_API ms_status ms_trace_csv(const ms_trace *trace, char **out);

/* ---- Properties ---- */

/* 53 asserts and 53 covers; `pause_edges` is 2^c_size for the controller. */
MS_API ms_status ms_suite_builtin(uint64_t pause_edges, ms_suite **suite);
MS_API ms_status ms_suite_parse(const char *text, ms_suite **suite);
MS_API size_t ms_suite_size(const ms_suite *suite);
MS_API ms_status ms_suite_format(const ms_suite *suite, char **out);
MS_API void ms_suite_free(ms_suite *suite);

MS_API ms_status ms_stats_new(ms_stats **stats);
MS_API void ms_stats_free(ms_stats *stats);
/* Evaluates `suite` over `trace` and adds the counters into `stats`.
 * `events` (may be NULL) receives the failure log. */
MS_API ms_status ms_evaluate(const ms_trace *trace, const ms_suite *suite, unsigned workers, ms_stats *stats,
                             char **events);
MS_API ms_status ms_stats_report(const ms_stats *stats, int json, char **out);
MS_API ms_status ms_stats_from_json(const char *text, ms_stats **stats);
/* Nonzero when every assert has a real success and every cover a match. */
MS_API ms_status ms_stats_all_covered(const ms_stats *stats, int *out);

/* ---- Coverage ---- */

/* `stats` may be NULL (assertion coverage then reported as not applicable). */
MS_API ms_status ms_coverage(const ms_trace *const *traces, size_t count, const ms_stats *stats, unsigned workers,
                             int json, char **out);

/* ---- Diagnosis ---- */

/* `classes` is a comma-separated list (saf, tf, af, af_noaccess, af_mapsto,
 * af_also, cfin, cfin_any, cfid, cfst, drf). `strict_mismatch` is set when a
 * SAF or TF row differs from the published syndrome. */
MS_API ms_status ms_syndromes(const ms_config *config, const char *classes, size_t max_instances,
                              uint64_t drf_limit, unsigned workers, int json, int compare, char **out,
                              int *strict_mismatch);
/* `algorithms` is a comma-separated list of built-in names. `strict_mismatch`
 * is set when a SAF or TF cell contradicts the published table. */
MS_API ms_status ms_capability(const char *algorithms, const char *classes, uint64_t words, unsigned width,
                               uint64_t max_cells, unsigned workers, int json, int compare, char **out,
                               int *strict_mismatch);

#ifdef __cplusplus
}
#endif

#endif /* MARCHSIM_H */
