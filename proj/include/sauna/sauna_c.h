/* C API for the sauna training library.
 *
 * All entry points return a status code; SAUNA_OK is zero. On failure,
 * sauna_last_error() returns a thread-local description of the most recent
 * error. Handles are opaque and must be released with their destroy call.
 */
#ifndef SAUNA_C_H_
#define SAUNA_C_H_

#include <stddef.h>

#if defined _WIN32
#define SAUNA_API __declspec(dllexport)
#else
#define SAUNA_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sauna_status {
  SAUNA_OK = 0,
  SAUNA_ERR_INVALID_ARGUMENT = 1, /* bad key, value, or parameter */
  SAUNA_ERR_IO = 2,               /* missing/garbled file or directory */
  SAUNA_ERR_RUNTIME = 3,          /* internal failure */
  SAUNA_ERR_SEEDS_FAILED = 4,     /* run finished but some seeds aborted */
} sauna_status;

typedef struct sauna_config sauna_config;

SAUNA_API const char* sauna_version(void);

/* Thread-local message for the most recent failing call. Never NULL. */
SAUNA_API const char* sauna_last_error(void);

/* Configuration handles start from built-in defaults. */
SAUNA_API sauna_status sauna_config_create(sauna_config** out);
SAUNA_API void sauna_config_destroy(sauna_config* config);

/* Merges a flat key = value file into the handle. */
SAUNA_API sauna_status sauna_config_load(sauna_config* config, const char* path);
SAUNA_API sauna_status sauna_config_set(sauna_config* config, const char* key,
                                        const char* value);
/* Copies the value into buffer (NUL-terminated, truncating if needed). */
SAUNA_API sauna_status sauna_config_get(const sauna_config* config, const char* key,
                                        char* buffer, size_t buffer_size);

/* Trains every configured seed. A non-NULL output_dir overrides the
 * config's output_dir. Returns SAUNA_ERR_SEEDS_FAILED if any seed aborted
 * (the others still complete and all files are written). */
SAUNA_API sauna_status sauna_run_experiment(const sauna_config* config,
                                            const char* output_dir);

/* Final-performance comparison of two runs (or suite directories).
 * out_path NULL writes the CSV table to stdout. */
SAUNA_API sauna_status sauna_compare(const char* dir_a, const char* dir_b,
                                     const char* out_path);

/* Long-format plot data for one metric across run directories. */
SAUNA_API sauna_status sauna_export_metric(const char* const* run_dirs,
                                           size_t run_dir_count, const char* metric,
                                           const char* out_dir);

/* Built-in suites; name must be "paper-suite". overrides may be NULL. */
SAUNA_API sauna_status sauna_run_suite(const char* suite_name, const char* out_dir,
                                       const sauna_config* overrides);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* SAUNA_C_H_ */
