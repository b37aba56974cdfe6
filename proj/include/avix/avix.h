/* C interface to the avix trajectory conflict analysis library.
 *
 * Every function returning avix_status reports failure through the status
 * value; avix_last_error() then holds a message for the calling thread.
 * Handles are opaque and owned by the caller. */
#ifndef AVIX_AVIX_H
#define AVIX_AVIX_H

#include <stddef.h>

#if defined(_WIN32)
#  ifdef AVIX_BUILDING_CAPI
#    define AVIX_API __declspec(dllexport)
#  else
#    define AVIX_API __declspec(dllimport)
#  endif
#else
#  define AVIX_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum avix_status {
  AVIX_OK = 0,
  AVIX_ERR_CONFIG = 1,     /* bad option, parameter or path */
  AVIX_ERR_PARSE = 2,      /* malformed input record */
  AVIX_ERR_DATA = 3,       /* inputs violate an invariant or reference something missing */
  AVIX_ERR_DEPENDENCY = 4, /* an upstream artifact is missing */
  AVIX_ERR_DOMAIN = 5,     /* argument outside a function's domain */
  AVIX_ERR_IO = 6,
  AVIX_ERR_INTERNAL = 7,
  AVIX_ERR_NULL = 8        /* a required pointer was NULL */
} avix_status;

typedef struct avix_config avix_config;

AVIX_API const char* avix_version(void);

/* Message of the most recent failure on this thread; "" after success. */
AVIX_API const char* avix_last_error(void);

/* Pipeline configuration. Defaults match the documented parameter values. */
AVIX_API avix_status avix_config_create(avix_config** out);
AVIX_API void avix_config_destroy(avix_config* cfg);

/* Merges a JSON document (same layout as the --config file) into cfg. */
AVIX_API avix_status avix_config_load_json(avix_config* cfg, const char* json_text);
AVIX_API avix_status avix_config_load_file(avix_config* cfg, const char* path);

/* Dotted keys as in the JSON layout, e.g. "conflict.pet_max", "filter.order",
 * "threads". Integer keys accept integral values only. */
AVIX_API avix_status avix_config_set_double(avix_config* cfg, const char* key, double value);
AVIX_API avix_status avix_config_set_bool(avix_config* cfg, const char* key, int value);

/* "input", "out_dir" */
AVIX_API avix_status avix_config_set_string(avix_config* cfg, const char* key, const char* value);
AVIX_API avix_status avix_config_add_map(avix_config* cfg, const char* path);
AVIX_API avix_status avix_config_clear_maps(avix_config* cfg);

/* Current configuration as JSON. The string stays valid until the next call
 * on cfg. */
AVIX_API const char* avix_config_to_json(avix_config* cfg);

/* Runs one stage: "smooth", "detect-intersections", "detect-conflicts",
 * "metrics", "stats", "report"; or "run" for the full pipeline with its
 * manifest. Artifacts are written to the configured output directory. */
AVIX_API avix_status avix_run_stage(const avix_config* cfg, const char* stage);

/* Per-frame metric formulas. *defined is set to 0 when the value does not
 * exist (standstill or no closing speed) and to 1 otherwise. */
AVIX_API avix_status avix_ttc_crossing(double d_f, double v_f, double* out, int* defined);
AVIX_API avix_status avix_ttc_merging(double d_f, double v_f, double v_l, double* out, int* defined);
AVIX_API avix_status avix_time_advantage(double d_f, double v_f, double d_l, double v_l, double* out, int* defined);

/* Zero-phase low-pass smoothing of a speed series with the default filter
 * (cutoff_hz <= 0 keeps the default cutoff). out must hold n values. */
AVIX_API avix_status avix_smooth_speed(const double* v, size_t n, double cutoff_hz, int order, double* out);

#ifdef __cplusplus
}
#endif

#endif /* AVIX_AVIX_H */
