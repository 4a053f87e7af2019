/*
 * rectiflow C API: stable shared-library surface for the steady-state
 * thermal-rectifier simulator and optimizer.
 *
 * All state lives behind opaque handles; every function returns a coarse
 * status code. A human-readable message for the most recent failure on the
 * calling thread is available from rf_last_error(). Strings returned by
 * accessor functions are owned by their handle and remain valid until the
 * handle is freed.
 */
#ifndef RECTIFLOW_H
#define RECTIFLOW_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rf_status {
  RF_OK = 0,
  RF_ERR_CONFIG = 1,  /* malformed/invalid configuration */
  RF_ERR_DOMAIN = 2,  /* physically invalid input or undefined quantity */
  RF_ERR_NUMERIC = 3  /* numerical failure */
} rf_status;

/* Opaque experiment configuration. */
typedef struct rf_config rf_config;
/* Opaque result of one command run. */
typedef struct rf_result rf_result;

/* Parses a JSON configuration document. On success stores a new handle in
 * *out (free with rf_config_free). On failure *out is NULL. */
rf_status rf_config_parse(const char* json_text, rf_config** out);

/* Applies a dotted-path override with a JSON-encoded value, e.g.
 * rf_config_override(cfg, "engine", "\"analytic\""). */
rf_status rf_config_override(rf_config* config, const char* dotted_key,
                             const char* json_value);

/* Runs one command: "point", "tradeoff", "pareto", or "regions".
 * On success stores a new result handle in *out (free with rf_result_free). */
rf_status rf_run(const rf_config* config, const char* command,
                 rf_result** out);

/* CSV rendering of the result (never NULL on a valid handle). */
const char* rf_result_csv(const rf_result* result);
/* JSON rendering / summary of the result (never NULL on a valid handle). */
const char* rf_result_json(const rf_result* result);
/* Non-fatal warnings accumulated during the run, one per line; empty string
 * when there were none. */
const char* rf_result_warnings(const rf_result* result);

/* Reads one configuration value by dotted path. For "output.path" and
 * "output.format" the effective (defaulted) value is returned even when the
 * document never set it; for any other key the configured value is returned
 * (strings verbatim, everything else JSON-encoded), or NULL when absent.
 * The buffer is owned by the handle and valid until the next rf_config_*
 * call on the same handle. */
const char* rf_config_get(rf_config* config, const char* dotted_key);

void rf_config_free(rf_config* config);
void rf_result_free(rf_result* result);

/* Message for the most recent failure on the calling thread; empty string
 * when the last call succeeded. The buffer is thread-local. */
const char* rf_last_error(void);

/* Library version, e.g. "0.1.0". */
const char* rf_version(void);

/* Worker count the library would use by default: the RECTIFLOW_THREADS
 * environment variable when set, otherwise the hardware concurrency. */
unsigned rf_default_threads(void);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* RECTIFLOW_H */
