/* Exercises the C interface from C. */
#include <math.h>
#include <stdio.h>
#include <string.h>

#include "plc/plc.h"

static int failures = 0;

#define EXPECT(cond)                                             \
  do {                                                           \
    if (!(cond)) {                                               \
      fprintf(stderr, "%s:%d: failed: %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                \
    }                                                            \
  } while (0)

int main(void) {
  plc_config* cfg = NULL;
  plc_run* run = NULL;
  double v = 0.0;

  EXPECT(strlen(plc_version()) > 0);

  EXPECT(plc_config_from_json("{not json", &cfg) == PLC_CONFIG_ERROR);
  EXPECT(cfg == NULL);
  EXPECT(strstr(plc_last_error(), "ConfigError") != NULL);
  EXPECT(plc_exit_code(PLC_CONFIG_ERROR) == 2);
  EXPECT(plc_exit_code(PLC_CFL_VIOLATION) == 3);
  EXPECT(plc_exit_code(PLC_OK) == 0);
  EXPECT(strcmp(plc_error_name(PLC_COMPATIBILITY_VIOLATION), "CompatibilityViolation") == 0);

  EXPECT(plc_heat_kernel(0, 1.0, 0.3, 2.0, 0.0, &v) == PLC_OK);
  EXPECT(fabs(v - 0.223482579688792) < 1e-12);
  EXPECT(plc_heat_kernel(1, 1.0, 0.3, 2.0, 0.0, &v) == PLC_OK);
  EXPECT(fabs(v - 0.224181623570786) < 1e-12);
  EXPECT(plc_heat_kernel(0, 1.0, 0.3, 2.0, 0.3, &v) == PLC_NONPOSITIVE_TIME_GAP);
  EXPECT(plc_heat_kernel(5, 1.0, 0.3, 2.0, 0.0, &v) == PLC_INVALID_ARGUMENT);

  EXPECT(plc_config_from_json("{\"data\": {\"preset\": \"smooth\", \"u0\": 0.1}}", &cfg) == PLC_OK);
  /* A constant velocity does not vanish at the nonslip walls. */
  EXPECT(plc_run_create(cfg, &run) == PLC_COMPATIBILITY_VIOLATION);
  EXPECT(strstr(plc_last_error(), "CompatibilityViolation") != NULL);
  plc_config_free(cfg);

  EXPECT(plc_config_from_json("{\"data\": {\"preset\": \"zero\"}, \"grids\": {\"K\": 64, \"nx\": 8},"
                              " \"T\": 0.1}",
                              &cfg) == PLC_OK);
  EXPECT(plc_config_set_mode(cfg, "wave-only") == PLC_OK);
  EXPECT(plc_config_set_mode(cfg, "nope") == PLC_CONFIG_ERROR);
  EXPECT(plc_config_set_check_level(cfg, "medium") == PLC_CONFIG_ERROR);
  EXPECT(plc_config_set_out(cfg, "somewhere") == PLC_OK);
  EXPECT(strcmp(plc_config_out(cfg), "somewhere") == 0);
  EXPECT(strstr(plc_config_json(cfg), "\"wave-only\"") != NULL);
  EXPECT(plc_run_create(cfg, &run) == PLC_OK);
  EXPECT(plc_run_pass(run) == 1);
  EXPECT(plc_run_check_count(run) > 0);
  {
    const char* name = NULL;
    double value = 1.0, bound = 0.0;
    int pass = 0;
    EXPECT(plc_run_check(run, 0, &name, &value, &bound, &pass) == PLC_OK);
    EXPECT(name != NULL && strlen(name) > 0);
    EXPECT(pass == 1);
    EXPECT(plc_run_check(run, 1000, &name, &value, &bound, &pass) == PLC_INVALID_ARGUMENT);
  }
  EXPECT(strstr(plc_run_summary_json(run), "\"pass\": true") != NULL);
  EXPECT(strstr(plc_run_check_table(run), "PASS") != NULL);
  plc_run_free(run);
  plc_config_free(cfg);

  EXPECT(plc_run_create(NULL, &run) == PLC_INVALID_ARGUMENT);
  EXPECT(plc_run_pass(NULL) == 0);

  if (failures) fprintf(stderr, "%d failures\n", failures);
  return failures ? 1 : 0;
}
