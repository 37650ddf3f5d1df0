/*
 * C interface to the hybrid-optimizer library. All entry points return an
 * esopt_status; on failure, esopt_last_error() describes what went wrong
 * (per thread). Objects are created and destroyed through this interface
 * only — callers never see their layout.
 *
 * Strings returned through char** parameters are heap-allocated and must
 * be released with esopt_string_free(). Strings returned as const char*
 * are static and must not be freed.
 */
#ifndef ESOPT_H
#define ESOPT_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

/* Opaque experiment configuration. */
typedef struct esopt_config esopt_config;
/* Opaque result of a finished optimizer run. */
typedef struct esopt_result esopt_result;

typedef enum esopt_status {
    ESOPT_OK = 0,
    ESOPT_ERR_INVALID_ARGUMENT = 1, /* null handle or bad buffer */
    ESOPT_ERR_PARSE = 2,            /* malformed config text */
    ESOPT_ERR_VALIDATION = 3,       /* a setting violates its invariant */
    ESOPT_ERR_RUNTIME = 4,          /* numerical or algorithmic failure */
    ESOPT_ERR_IO = 5                /* file read/write failure */
} esopt_status;

/* Library version as "major.minor.patch". */
const char* esopt_version(void);

/* Stable identifier for a status code, e.g. "ESOPT_ERR_PARSE". */
const char* esopt_status_name(esopt_status status);

/* Message describing this thread's most recent failure ("" if none). */
const char* esopt_last_error(void);

/* --- configuration ----------------------------------------------------- */

/* Create a config holding every default setting. */
esopt_status esopt_config_defaults(esopt_config** out_config);

/* Load and validate a config file. */
esopt_status esopt_config_load(const char* path, esopt_config** out_config);

/* Replace the random seed (e.g. from a command-line flag). */
esopt_status esopt_config_override_seed(esopt_config* config, uint64_t seed);

/* Replace the output directory. */
esopt_status esopt_config_override_output_dir(esopt_config* config,
                                              const char* dir);

/* Serialize the effective settings in the config-file format. */
esopt_status esopt_config_dump(const esopt_config* config, char** out_text);

/* Directory experiment outputs will be written to. */
esopt_status esopt_config_output_dir(const esopt_config* config, char** out_dir);

void esopt_config_free(esopt_config* config);

/* --- execution --------------------------------------------------------- */

/* Run the configured experiment; writes the output files and returns the
 * run outcome. */
esopt_status esopt_run_experiment(const esopt_config* config,
                                  esopt_result** out_result);

/* Evaluate the configured objective surface grid and write mesh.csv;
 * returns the written path. */
esopt_status esopt_export_mesh(const esopt_config* config, char** out_path);

/* --- results ----------------------------------------------------------- */

esopt_status esopt_result_best_value(const esopt_result* result,
                                     double* out_value);

esopt_status esopt_result_dimension(const esopt_result* result,
                                    size_t* out_dimension);

/* Copy the best position into out_position (capacity >= dimension). */
esopt_status esopt_result_best_position(const esopt_result* result,
                                        double* out_position, size_t capacity);

esopt_status esopt_result_evaluations(const esopt_result* result,
                                      uint64_t* out_evaluations);

/* Termination reason as a static string: "budget" or "tolerance". */
esopt_status esopt_result_terminated_by(const esopt_result* result,
                                        const char** out_reason);

void esopt_result_free(esopt_result* result);

/* Release a string returned through a char** parameter. */
void esopt_string_free(char* text);

#ifdef __cplusplus
}
#endif

#endif /* ESOPT_H */
