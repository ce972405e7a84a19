/*
 * C interface to the optomech library.
 *
 * Handles are opaque and owned by the caller; free them with the matching
 * *_free function. Functions returning om_status leave a description of the
 * last failure in om_last_error(), which is per thread.
 */
#ifndef OPTOMECH_H
#define OPTOMECH_H

#include <stddef.h>

#if defined(OPTOMECH_BUILDING_LIBRARY)
#define OM_API __attribute__((visibility("default")))
#else
#define OM_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef struct om_config om_config;
typedef struct om_result om_result;

typedef enum om_status {
  OM_OK = 0,
  OM_ERR_INVALID_ARGUMENT = 1,
  OM_ERR_PARSE = 2,
  OM_ERR_IO = 3,
  OM_ERR_UNSTABLE = 4,
  OM_ERR_UNPHYSICAL = 5,
  OM_ERR_INTERNAL = 6,
  /* not an error: the requested cell is blank (unstable row) */
  OM_EMPTY = 7
} om_status;

OM_API const char* om_version(void);
OM_API const char* om_last_error(void);
OM_API const char* om_status_string(om_status status);

OM_API om_status om_config_load(const char* path, om_config** out);
OM_API om_status om_config_parse(const char* text, om_config** out);
OM_API void om_config_free(om_config* config);
/* 1 when the config carries a sweep block */
OM_API int om_config_has_sweep(const om_config* config);

/* threads == 0 picks OPTOMECH_THREADS or the hardware concurrency */
OM_API om_status om_sweep_run(const om_config* config, unsigned threads, om_result** out);
/* stability verdicts only, no covariance */
OM_API om_status om_stability_run(const om_config* config, unsigned threads, om_result** out);
/* one point at the given detuning (units of omega_m); keeps the covariance */
OM_API om_status om_point_run(const om_config* config, double detuning, om_result** out);
OM_API void om_result_free(om_result* result);

OM_API size_t om_result_rows(const om_result* result);
OM_API size_t om_result_columns(const om_result* result);
OM_API const char* om_result_column_name(const om_result* result, size_t column);
/* booleans read as 0/1; OM_EMPTY for a blank cell */
OM_API om_status om_result_value(const om_result* result, size_t row, size_t column,
                                 double* value);
OM_API om_status om_result_write_csv(const om_result* result, const char* path);

/* dimension of the stored covariance, 0 when there is none */
OM_API size_t om_result_covariance_dim(const om_result* result);
/* row-major copy; capacity counts doubles */
OM_API om_status om_result_covariance(const om_result* result, double* out, size_t capacity);

#ifdef __cplusplus
}
#endif

#endif /* OPTOMECH_H */
