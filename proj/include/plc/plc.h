/* C interface of the poiseuille-lc solver.
 *
 * Every function that can fail returns a plc_status (0 on success). The
 * message of the most recent failure on the calling thread is available
 * from plc_last_error(). Strings returned by the library are owned by the
 * handle they came from and stay valid until that handle is freed.
 */
#ifndef PLC_H
#define PLC_H

#ifdef __cplusplus
extern "C" {
#endif

#if defined(PLC_BUILDING_LIBRARY)
#define PLC_API __attribute__((visibility("default")))
#else
#define PLC_API
#endif

typedef int plc_status;

#define PLC_OK 0
#define PLC_INVALID_ARGUMENT 1
#define PLC_INVALID_COEFFICIENTS 2
#define PLC_COMPATIBILITY_VIOLATION 3
#define PLC_CONFIG_ERROR 4
#define PLC_QUADRATURE_FAILURE 10
#define PLC_NONPOSITIVE_PQ 11
#define PLC_HORIZON_NOT_REACHED 12
#define PLC_CUSP_AT_ROBIN_BOUNDARY 13
#define PLC_LOOKUP_MISS 14
#define PLC_NONPOSITIVE_TIME_GAP 20
#define PLC_WINDOW_UNDER_RESOLVED 21
#define PLC_FIXED_POINT_DIVERGED 30
#define PLC_WINDOW_COLLAPSED 31
#define PLC_CFL_VIOLATION 40
#define PLC_BLOWUP_DETECTED 41
#define PLC_IO_ERROR 50
#define PLC_INTERNAL 99

typedef struct plc_config plc_config;
typedef struct plc_run plc_run;

PLC_API const char* plc_version(void);

/* Configuration. */
PLC_API plc_status plc_config_default(plc_config** out);
PLC_API plc_status plc_config_load(const char* path, plc_config** out);
PLC_API plc_status plc_config_from_json(const char* text, plc_config** out);
PLC_API void plc_config_free(plc_config* cfg);
/* "coupled", "wave-only" or "fd-only". */
PLC_API plc_status plc_config_set_mode(plc_config* cfg, const char* mode);
PLC_API plc_status plc_config_set_out(plc_config* cfg, const char* dir);
/* "fast" or "full". */
PLC_API plc_status plc_config_set_check_level(plc_config* cfg, const char* level);
PLC_API const char* plc_config_out(const plc_config* cfg);
/* Normalized JSON echo of the configuration. */
PLC_API const char* plc_config_json(plc_config* cfg);

/* Runs. plc_run_create solves the problem and evaluates the checks of the
 * configured level; it does not write anything. */
PLC_API plc_status plc_run_create(const plc_config* cfg, plc_run** out);
PLC_API void plc_run_free(plc_run* run);
PLC_API plc_status plc_run_write(const plc_run* run, const char* dir);
PLC_API const char* plc_run_summary_json(const plc_run* run);
/* 1 if every check passed, 0 otherwise (also for a null handle). */
PLC_API int plc_run_pass(const plc_run* run);
PLC_API int plc_run_check_count(const plc_run* run);
PLC_API plc_status plc_run_check(const plc_run* run, int index, const char** name, double* value,
                                 double* bound, int* pass);
PLC_API const char* plc_run_check_table(const plc_run* run);

/* Cross product of the config's "sweep" object into dir/run_NNN plus
 * dir/index.csv. Per-run failures are counted in *failed. */
PLC_API plc_status plc_sweep(const plc_config* cfg, const char* dir, int* failed);

/* Errors. */
PLC_API const char* plc_last_error(void);
PLC_API const char* plc_error_name(plc_status code);
/* Process exit code for a failure: 2 for input errors, 3 for solver errors. */
PLC_API int plc_exit_code(plc_status code);

/* Interval heat kernels: kind 0 is the Dirichlet (Green) kernel, 1 the Neumann kernel. */
PLC_API plc_status plc_heat_kernel(int kind, double x, double t, double xi, double tau, double* out);

#ifdef __cplusplus
}
#endif

#endif
