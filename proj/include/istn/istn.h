/* Coverage analysis of integrated satellite-terrestrial networks under
 * Boolean blockage: analytic evaluation, Monte Carlo simulation and sweeps.
 *
 * All functions are thread-safe on distinct handles. On failure a function
 * returns a non-zero istn_status and istn_last_error() describes it.
 */
#ifndef ISTN_ISTN_H
#define ISTN_ISTN_H

#include <stddef.h>
#include <stdint.h>

#if defined(ISTN_BUILDING_LIBRARY)
#define ISTN_API __attribute__((visibility("default")))
#else
#define ISTN_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum istn_status {
  ISTN_OK = 0,
  ISTN_INVALID_ARGUMENT = 1,
  ISTN_CONFIG = 2,
  ISTN_NUMERICAL = 3,
  ISTN_VERIFY = 4,
  ISTN_IO = 5,
  ISTN_INTERNAL = 6
} istn_status;

typedef enum istn_tier { ISTN_TIER_SAT = 0, ISTN_TIER_TER = 1, ISTN_TIER_ISTN = 2 } istn_tier;

typedef struct istn_scenario istn_scenario;
typedef struct istn_model istn_model;

ISTN_API const char* istn_version(void);

/* Message for the last failure on the calling thread; empty after success. */
ISTN_API const char* istn_last_error(void);

/* Scenarios: `key = value` text with annotated units. */
ISTN_API istn_status istn_scenario_from_file(const char* path, istn_scenario** out);
ISTN_API istn_status istn_scenario_from_string(const char* text, istn_scenario** out);
ISTN_API istn_status istn_scenario_reference(istn_scenario** out);
ISTN_API istn_status istn_scenario_set(istn_scenario* scenario, const char* key, const char* value);
ISTN_API istn_status istn_scenario_get(const istn_scenario* scenario, const char* key, double* value);
/* Writes at most `capacity` bytes including the terminator; `needed` gets
 * the full size including the terminator. */
ISTN_API istn_status istn_scenario_serialize(const istn_scenario* scenario, char* buffer, size_t capacity,
                                             size_t* needed);
ISTN_API void istn_scenario_free(istn_scenario* scenario);

typedef struct istn_model_options {
  int strict_ter_sum; /* literal terrestrial LoS sum without the s^k factor */
} istn_model_options;

ISTN_API void istn_model_options_init(istn_model_options* options);

/* Validates the scenario and builds both tier models. */
ISTN_API istn_status istn_model_create(const istn_scenario* scenario, const istn_model_options* options,
                                       istn_model** out);
ISTN_API void istn_model_free(istn_model* model);

ISTN_API istn_status istn_analytic_coverage(const istn_model* model, istn_tier tier, double tau_db, double* coverage,
                                            double* quad_err);

typedef struct istn_mc_options {
  uint64_t trials;
  uint64_t seed;
  int round_serving_shape; /* serving satellite fade with the rounded shape */
  int exact_sr;            /* shadowed-Rician fades on satellite links */
  int explicit_sat_paths;  /* blockages drawn along each satellite link */
  int geometric_ter_los;   /* serving TBS link against a rectangle field */
  int threads;             /* 0: ISTN_THREADS or hardware concurrency */
} istn_mc_options;

ISTN_API void istn_mc_options_init(istn_mc_options* options);

ISTN_API istn_status istn_mc_coverage(const istn_model* model, istn_tier tier, double tau_db,
                                      const istn_mc_options* options, double* mean, double* half_width_95);

typedef struct istn_run_options {
  const char* scenario_path;
  const char* sweep_path; /* optional */
  const char* preset;     /* optional: fig2a, fig2b, fig3a, fig3b, fig4 */
  const char* out_dir;
  const char* methods; /* optional, e.g. "analytic,mc" */
  const char* tiers;   /* optional, e.g. "sat,ter,istn" */
  uint64_t trials;
  uint64_t seed;
  int verify;
  double tol_tier;
  double tol_istn;
  int strict_ter_sum;
  int emit_only;
  istn_mc_options mc; /* trials and seed above take precedence */
} istn_run_options;

typedef struct istn_run_summary {
  size_t rows;
  size_t verified_pairs;
  double max_abs_diff;
} istn_run_summary;

ISTN_API void istn_run_options_init(istn_run_options* options);

/* Runs a scenario or preset and writes results.csv, metadata.json, plot
 * files and (with verify) verify.csv. Returns ISTN_VERIFY when an
 * analytic/MC pair exceeds tolerance. `summary` may be NULL. */
ISTN_API istn_status istn_run(const istn_run_options* options, istn_run_summary* summary);

/* Writes the scenario and sweep files of a figure preset. */
ISTN_API istn_status istn_emit_preset(const char* name, const char* out_dir);

#ifdef __cplusplus
}
#endif

#endif
