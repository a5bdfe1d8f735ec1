/* C interface to the layered caching simulator and analysis library.
 *
 * Objects are opaque handles released with the matching *_free function.
 * Every fallible call returns an lc_status; on failure lc_last_error()
 * describes the problem (thread-local, valid until the next failing call on
 * the same thread). Strings returned through char** are heap allocated and
 * released with lc_string_free. Object, version and layer indices are
 * zero-based.
 */
#ifndef LAYERCACHE_H
#define LAYERCACHE_H

#include <stddef.h>
#include <stdint.h>

#if defined(LAYERCACHE_BUILDING)
#define LC_API __attribute__((visibility("default")))
#else
#define LC_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum lc_status {
  LC_OK = 0,
  LC_ERROR_INVALID_ARGUMENT = 1,
  LC_ERROR_VALIDATION = 2, /* bad catalog or experiment description */
  LC_ERROR_RUNTIME = 3,
  LC_ERROR_IO = 4,
  LC_ERROR_RESOURCE = 5, /* e.g. static-opt table over its memory cap */
  LC_ERROR_UNKNOWN_NAME = 6 /* unknown policy or preset */
} lc_status;

typedef enum lc_clock { LC_CLOCK_DISCRETE = 0, LC_CLOCK_POISSON = 1 } lc_clock;

typedef enum lc_hybrid_form { LC_HYBRID_NONE = 0, LC_HYBRID_MR = 1, LC_HYBRID_LR = 2 } lc_hybrid_form;

typedef struct lc_catalog lc_catalog;
typedef struct lc_trace lc_trace;
typedef struct lc_report lc_report;
typedef struct lc_approx lc_approx;

LC_API const char* lc_last_error(void);
LC_API const char* lc_version(void);
LC_API void lc_string_free(char* s);

/* Catalogs. Matrices are row-major objects x versions; mr_size may be NULL. */
LC_API lc_status lc_catalog_create(size_t objects, size_t versions, const double* layer_size,
                                   const double* rate, const double* mr_size, lc_catalog** out);
LC_API lc_status lc_catalog_from_json(const char* json, lc_catalog** out);
LC_API lc_status lc_catalog_load(const char* path, lc_catalog** out);
LC_API lc_status lc_catalog_to_json(const lc_catalog* catalog, char** out);
LC_API size_t lc_catalog_objects(const lc_catalog* catalog);
LC_API size_t lc_catalog_versions(const lc_catalog* catalog);
LC_API void lc_catalog_free(lc_catalog* catalog);

/* Traces of IRM requests drawn from the catalog's request probabilities. */
LC_API lc_status lc_trace_sample(const lc_catalog* catalog, size_t length, uint64_t seed,
                                 lc_trace** out);
LC_API lc_status lc_trace_load(const char* path, const lc_catalog* catalog, lc_trace** out);
LC_API lc_status lc_trace_save(const lc_trace* trace, const char* path);
LC_API size_t lc_trace_length(const lc_trace* trace);
LC_API lc_status lc_trace_get(const lc_trace* trace, size_t index, uint32_t* object,
                              uint32_t* version);
LC_API void lc_trace_free(lc_trace* trace);

/* Trace replay. policy: llru, llfu, lbelady, mrlru, hlru, hlfu-static, static-opt. */
LC_API lc_status lc_simulate(const char* policy, const lc_catalog* catalog, double capacity,
                             const lc_trace* trace, lc_report** out);
LC_API uint64_t lc_report_requests(const lc_report* report);
LC_API uint64_t lc_report_hits(const lc_report* report);
LC_API double lc_report_hit_rate(const lc_report* report);
LC_API lc_status lc_report_version(const lc_report* report, size_t object, size_t version,
                                   uint64_t* requests, uint64_t* hits);
LC_API lc_status lc_report_layer(const lc_report* report, size_t object, size_t layer,
                                 uint64_t* requests, uint64_t* hits);
LC_API void lc_report_free(lc_report* report);

/* Working-set approximation (tol <= 0 selects the default 1e-9). */
LC_API lc_status lc_approx_solve(const lc_catalog* catalog, double capacity, lc_clock clock,
                                 double tol, lc_approx** out);
LC_API lc_status lc_approx_solve_mr(const lc_catalog* catalog, double capacity, lc_clock clock,
                                    double tol, lc_approx** out);
/* +inf when everything requested fits. */
LC_API double lc_approx_characteristic_time(const lc_approx* approx);
LC_API double lc_approx_residual(const lc_approx* approx);
LC_API double lc_approx_hit_rate(const lc_approx* approx);
LC_API lc_status lc_approx_hit_prob(const lc_approx* approx, size_t object, size_t index,
                                    double* out);
LC_API lc_status lc_approx_write_csv(const lc_approx* approx, const char* path);
LC_API void lc_approx_free(lc_approx* approx);

/* Static placements. prefix_out / forms_out / values_out hold one entry per
 * object; value_out receives the cached request rate. resolution <= 0 picks
 * a default size grid. prefix_out is the number of cached layers. values_out
 * is the zero-based cached version for LC_HYBRID_MR and the number of cached
 * layers for LC_HYBRID_LR. */
LC_API lc_status lc_static_optimal(const lc_catalog* catalog, double capacity, double resolution,
                                   uint32_t* prefix_out, double* value_out);
LC_API lc_status lc_hlfu_static(const lc_catalog* catalog, double capacity, int* forms_out,
                                uint32_t* values_out, double* value_out);

LC_API lc_status lc_variance_bound(size_t objects, size_t versions, double delta_max, double* out);

/* Experiments. Presets and configs are JSON documents. */
LC_API lc_status lc_preset_names(char** out); /* newline separated */
LC_API lc_status lc_config_preset(const char* name, char** json_out);
/* LC_OK when valid; LC_ERROR_VALIDATION with one problem per line in
 * problems_out (may be NULL) otherwise. */
LC_API lc_status lc_config_validate(const char* json, char** problems_out);
/* mode_override and out_dir may be NULL. summary_out (may be NULL) receives
 * {"csv": path, "meta": path, "rows": n}. */
LC_API lc_status lc_config_run(const char* json, const char* mode_override, const char* out_dir,
                               char** summary_out);

#ifdef __cplusplus
}
#endif

#endif /* LAYERCACHE_H */
