/* C interface to the ssnmg solver library. All handles are opaque; every
 * function that can fail returns an ssnmg_status and leaves a message for
 * ssnmg_last_error() on the calling thread. */
#ifndef SSNMG_H
#define SSNMG_H

#ifdef __cplusplus
extern "C" {
#endif

#if defined(__GNUC__)
#define SSNMG_API __attribute__((visibility("default")))
#else
#define SSNMG_API
#endif

typedef enum ssnmg_status {
  SSNMG_OK = 0,
  SSNMG_INVALID_ARGUMENT = 1,
  SSNMG_LEVEL_MISMATCH = 2,
  SSNMG_NOT_CONVERGED = 3,
  SSNMG_NOT_SPD = 4,
  SSNMG_DIMENSION_GUARD = 5,
  SSNMG_IO = 6,
  SSNMG_INTERNAL = 7
} ssnmg_status;

typedef struct ssnmg_config ssnmg_config;
typedef struct ssnmg_result ssnmg_result;

SSNMG_API const char* ssnmg_version(void);
SSNMG_API const char* ssnmg_status_string(ssnmg_status status);
/* Message of the last failed call on this thread ("" if none). */
SSNMG_API const char* ssnmg_last_error(void);

SSNMG_API ssnmg_status ssnmg_config_create(ssnmg_config** out);
SSNMG_API void ssnmg_config_destroy(ssnmg_config* config);
/* key=value setting as in a config file, e.g. ("beta", "1e-4,1e-5"). */
SSNMG_API ssnmg_status ssnmg_config_set(ssnmg_config* config, const char* key, const char* value);
SSNMG_API ssnmg_status ssnmg_config_load_file(ssnmg_config* config, const char* path);
SSNMG_API ssnmg_status ssnmg_config_validate(const ssnmg_config* config);

/* Runs every sweep point of the configuration. Solver failures are recorded
 * per row and counted by ssnmg_result_failed; the call itself still succeeds. */
SSNMG_API ssnmg_status ssnmg_run_sweep(const ssnmg_config* config, ssnmg_result** out);
/* study: "twogrid-rate", "spectral" or "wcycle-count". */
SSNMG_API ssnmg_status ssnmg_run_study(const ssnmg_config* config, const char* study, ssnmg_result** out);

SSNMG_API const char* ssnmg_result_csv(const ssnmg_result* result);
SSNMG_API int ssnmg_result_rows(const ssnmg_result* result);
SSNMG_API int ssnmg_result_failed(const ssnmg_result* result);
/* Writes the CSV text to a file. */
SSNMG_API ssnmg_status ssnmg_result_write(const ssnmg_result* result, const char* path);
SSNMG_API void ssnmg_result_destroy(ssnmg_result* result);

#ifdef __cplusplus
}
#endif

#endif
