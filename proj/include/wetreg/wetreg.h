/* C interface to the wetreg solver library.
 *
 * All objects are opaque handles created by the library and released with the
 * matching *_free function. Every fallible call returns a wetreg_status; on
 * failure wetreg_last_error() holds a message for the calling thread until
 * its next failing call. */
#ifndef WETREG_H
#define WETREG_H

#include <stddef.h>

#if defined(_WIN32)
#define WETREG_API __declspec(dllexport)
#elif defined(__GNUC__)
#define WETREG_API __attribute__((visibility("default")))
#else
#define WETREG_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum wetreg_status {
  WETREG_OK = 0,
  WETREG_ERR_INVALID_ARGUMENT = 1,
  WETREG_ERR_CONFIG = 2,
  WETREG_ERR_NOT_CONVERGED = 3,
  WETREG_ERR_LINEAR_SOLVE = 4,
  WETREG_ERR_FIT = 5,
  WETREG_ERR_IO = 6,
  WETREG_ERR_INTERNAL = 7
} wetreg_status;

typedef struct wetreg_config wetreg_config;
typedef struct wetreg_state wetreg_state;
typedef struct wetreg_sweep wetreg_sweep;
typedef struct wetreg_inner wetreg_inner;

typedef struct wetreg_state_info {
  double eps;
  double lambda;
  double residual_norm;
  double energy;
  double min_height;
  double volume;
  int iterations;
  int floor_steps;
  size_t nodes;
} wetreg_state_info;

/* Field order matches the columns of records.csv. */
typedef struct wetreg_record {
  double eps;
  double apparent_angle;
  double angle_error;
  double apparent_point;
  double point_error;
  double precursor_height;
  double precursor_prediction;
  double lambda;
  double lambda0_oracle;
  double energy;
  int iterations;
  double residual_norm;
} wetreg_record;

typedef struct wetreg_cap {
  double radius;
  double contact_half_width;
  double lambda0;
  double apex_height;
} wetreg_cap;

typedef struct wetreg_recovery_row {
  double eps;
  double width;
  double f_eps;
  double f_sharp;
  double gap;
} wetreg_recovery_row;

typedef struct wetreg_probe_summary {
  int count;
  int violations;
  double min_margin;
} wetreg_probe_summary;

typedef enum wetreg_format { WETREG_FORMAT_CSV = 0, WETREG_FORMAT_JSON = 1 } wetreg_format;

WETREG_API const char* wetreg_last_error(void);
WETREG_API const char* wetreg_status_name(wetreg_status status);

/* Configuration. Keys are the dotted names listed in the README. */
WETREG_API wetreg_status wetreg_config_create(wetreg_config** out);
WETREG_API wetreg_status wetreg_config_load(const char* path, wetreg_config** out);
WETREG_API wetreg_status wetreg_config_set(wetreg_config* cfg, const char* key,
                                           const char* value);
/* Copies the value of key into buf (NUL-terminated). *needed receives the
 * buffer size required, including the terminator. */
WETREG_API wetreg_status wetreg_config_get(const wetreg_config* cfg, const char* key,
                                           char* buf, size_t len, size_t* needed);
WETREG_API wetreg_status wetreg_config_validate(const wetreg_config* cfg);
WETREG_API wetreg_format wetreg_config_format(const wetreg_config* cfg);
WETREG_API void wetreg_config_free(wetreg_config* cfg);

/* Single equilibrium from the initial cap. log_path may be NULL; otherwise
 * the Newton history is written there as CSV. */
WETREG_API wetreg_status wetreg_solve(const wetreg_config* cfg, double eps,
                                      const char* log_path, wetreg_state** out);
WETREG_API wetreg_status wetreg_state_info_get(const wetreg_state* state,
                                               wetreg_state_info* out);
/* Copies up to n nodes of the profile; x may be NULL. */
WETREG_API wetreg_status wetreg_state_profile(const wetreg_state* state, double* x,
                                              double* h, size_t n);
WETREG_API wetreg_status wetreg_state_fit(const wetreg_state* state,
                                          const wetreg_config* cfg, double* angle,
                                          double* point);
/* Writes profile.csv and state.json into dir. */
WETREG_API wetreg_status wetreg_state_write(const wetreg_state* state,
                                            const wetreg_config* cfg, const char* dir);
WETREG_API void wetreg_state_free(wetreg_state* state);

/* eps sweep. With sweep.keep_going the call succeeds even if some eps fail;
 * wetreg_sweep_failure_count reports them. */
WETREG_API wetreg_status wetreg_sweep_run(const wetreg_config* cfg, const char* log_path,
                                          wetreg_sweep** out);
WETREG_API size_t wetreg_sweep_count(const wetreg_sweep* sweep);
WETREG_API size_t wetreg_sweep_failure_count(const wetreg_sweep* sweep);
WETREG_API wetreg_status wetreg_sweep_record(const wetreg_sweep* sweep, size_t i,
                                             wetreg_record* out);
WETREG_API wetreg_status wetreg_sweep_cap(const wetreg_sweep* sweep, wetreg_cap* out);
/* Writes records.csv or records.json plus one profile_eps_<eps>.csv per state. */
WETREG_API wetreg_status wetreg_sweep_write(const wetreg_sweep* sweep, const char* dir,
                                            wetreg_format format);
/* Slope of log(precursor height) against log(eps) over the sweep. */
WETREG_API wetreg_status wetreg_sweep_precursor_slope(const wetreg_sweep* sweep,
                                                      double* slope);
WETREG_API void wetreg_sweep_free(wetreg_sweep* sweep);

/* Leading-order inner profile for the configured material and inner.* range. */
WETREG_API wetreg_status wetreg_inner_compute(const wetreg_config* cfg, wetreg_inner** out);
WETREG_API size_t wetreg_inner_size(const wetreg_inner* inner);
WETREG_API wetreg_status wetreg_inner_samples(const wetreg_inner* inner, double* xi,
                                              double* H, size_t n);
WETREG_API double wetreg_inner_final_slope(const wetreg_inner* inner);
WETREG_API wetreg_status wetreg_inner_write(const wetreg_inner* inner, const char* path);
WETREG_API void wetreg_inner_free(wetreg_inner* inner);

/* Recovery-sequence probe on the initial cap over gamma.eps_list. Copies up
 * to cap rows; *count receives the number of rows produced. */
WETREG_API wetreg_status wetreg_gamma_check(const wetreg_config* cfg,
                                            wetreg_recovery_row* rows, size_t cap,
                                            size_t* count);

/* Energy lower-bound probe on probe.count random profiles at probe.eps.
 * margins may be NULL. */
WETREG_API wetreg_status wetreg_probe(const wetreg_config* cfg, double* margins,
                                      size_t cap, wetreg_probe_summary* out);

WETREG_API wetreg_status wetreg_cap_equilibrium(const wetreg_config* cfg, double volume,
                                                wetreg_cap* out);
/* Simpson volume of the initial cap on the configured grid, or v_target. */
WETREG_API wetreg_status wetreg_study_volume(const wetreg_config* cfg, double* out);

#ifdef __cplusplus
}
#endif

#endif
