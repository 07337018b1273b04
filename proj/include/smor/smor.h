/*
 * Copyright 2026 The smor Authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * C interface to the smor library: full-order wildland fire solver,
 * shifted-POD/shifted-DEIM reduced models and the benchmark harness.
 *
 * Every function returns a smor_status. On failure the message is available
 * through smor_last_error() on the calling thread until the next call.
 */
#ifndef SMOR_SMOR_H
#define SMOR_SMOR_H

#include <stddef.h>

#if defined(_WIN32)
#if defined(SMOR_BUILDING_LIBRARY)
#define SMOR_API __declspec(dllexport)
#else
#define SMOR_API __declspec(dllimport)
#endif
#else
#define SMOR_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum smor_status {
  SMOR_OK = 0,
  SMOR_ERR_INVALID_INPUT = 1,
  SMOR_ERR_DIMENSION = 2,
  SMOR_ERR_STIFFNESS = 3,
  SMOR_ERR_BUDGET = 4,
  SMOR_ERR_DIVERGENCE = 5,
  SMOR_ERR_SELECTION = 6,
  SMOR_ERR_LINEAR_SOLVE = 7,
  SMOR_ERR_TRACKING = 8,
  SMOR_ERR_OFFLINE = 9,
  SMOR_ERR_ONLINE = 10,
  SMOR_ERR_UNDEFINED_ERROR = 11,
  SMOR_ERR_IO = 12,
  SMOR_ERR_FORMAT = 13,
  SMOR_ERR_INTERNAL = 100
} smor_status;

typedef enum smor_case { SMOR_CASE_SEPARATED = 0, SMOR_CASE_GAUSSIAN = 1 } smor_case;

typedef struct smor_config smor_config;
typedef struct smor_model smor_model;

typedef struct smor_run_metrics {
  double beta;
  double err_temp;
  double err_smf;
  double err;
  double fom_time_s;
  double rom_time_s;
  double speedup;
  double handoff_residual;
  double smf_increase;
  size_t dof;
} smor_run_metrics;

typedef struct smor_sweep_summary {
  double err_min, err_mean, err_max;
  double speedup_min, speedup_mean, speedup_max;
  size_t n_ok;
  size_t n_failed;
} smor_sweep_summary;

SMOR_API const char* smor_version(void);
SMOR_API const char* smor_last_error(void);
SMOR_API const char* smor_status_name(smor_status status);
/* Nonzero for errors raised by the numerics (as opposed to bad input or I/O). */
SMOR_API int smor_status_is_numerical(smor_status status);
/* "off", "error", "warn", "info" or "debug". */
SMOR_API smor_status smor_set_log_level(const char* level);

/* preset: "desk" or "paper". */
SMOR_API smor_status smor_config_create(smor_case experiment, const char* preset, smor_config** out);
/* JSON file applied on top of the preset; the file may name the case. */
SMOR_API smor_status smor_config_load(const char* path, const char* preset, smor_config** out);
/* Applies a JSON document (same keys as a config file). */
SMOR_API smor_status smor_config_apply_json(smor_config* cfg, const char* json);
SMOR_API smor_status smor_config_set_out_dir(smor_config* cfg, const char* out_dir);
/* The returned string lives until the next call on cfg. */
SMOR_API smor_status smor_config_get_out_dir(smor_config* cfg, const char** out_dir);
/* The returned string lives until the next call on cfg. */
SMOR_API smor_status smor_config_to_json(smor_config* cfg, const char** json);
SMOR_API smor_status smor_config_digest(smor_config* cfg, const char** digest);
SMOR_API void smor_config_destroy(smor_config* cfg);

/* Full-order run at beta; stacked (T; S) snapshots written to out_path. */
SMOR_API smor_status smor_fom_run(const smor_config* cfg, double beta, const char* out_path, double* wall_time_s);
/* Training FOM runs under out_dir/training; writes manifest.json there. */
SMOR_API smor_status smor_generate_training_data(const smor_config* cfg);

/* Builds a reduced model. manifest_path may be NULL, in which case the
 * training runs are computed in memory. */
SMOR_API smor_status smor_offline_build(const smor_config* cfg, const char* manifest_path, smor_model** out);
SMOR_API smor_status smor_model_save(const smor_model* model, const char* path);
SMOR_API smor_status smor_model_load(const char* path, smor_model** out);
/* Reduced coefficients plus shifts. */
SMOR_API smor_status smor_model_dof(const smor_model* model, size_t* dof);
SMOR_API void smor_model_destroy(smor_model* model);

/* Reduced run at beta up to tf (tf <= 0 uses the configured final time).
 * csv_path (optional) receives one row per output time: time, relative
 * temperature and smf errors at that time (empty without a reference), and
 * one column per path. states_path (optional) receives the lifted states.
 * reference_path (optional) names a snapshot file from smor_fom_run; the
 * error fields of metrics are NaN without it. metrics may be NULL. */
SMOR_API smor_status smor_rom_run(const smor_config* cfg, const smor_model* model, double beta, double tf,
                                  const char* csv_path, const char* states_path, const char* reference_path,
                                  smor_run_metrics* metrics);

/* Test sweep over the configured test betas; per-beta rows to csv_path.
 * Failed betas are listed in the CSV and excluded from the summary. */
SMOR_API smor_status smor_sweep(const smor_config* cfg, const smor_model* model, const char* csv_path,
                                smor_sweep_summary* summary);

/* Accuracy/time comparison of both pipelines at test_beta, written to csv_path. */
SMOR_API smor_status smor_compare(const smor_config* cfg, const char* manifest_path, double test_beta,
                                  const char* csv_path);

#ifdef __cplusplus
}
#endif

#endif /* SMOR_SMOR_H */
