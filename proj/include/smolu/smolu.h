/* Copyright 2026 The smolu Authors.
 * SPDX-License-Identifier: Apache-2.0 */

#ifndef SMOLU_SMOLU_H_
#define SMOLU_SMOLU_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define SMOLU_API __declspec(dllexport)
#else
#define SMOLU_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes. The CLI exit codes reuse CONFIG (2) and NUMERICAL (3). */
typedef enum smolu_status {
  SMOLU_OK = 0,
  SMOLU_ERR_INTERNAL = 1,
  SMOLU_ERR_CONFIG = 2,
  SMOLU_ERR_NUMERICAL = 3,
  SMOLU_ERR_ARGUMENT = 4,
  SMOLU_ERR_CHECK_FAILED = 5
} smolu_status;

typedef struct smolu_config smolu_config;
typedef struct smolu_sim smolu_sim;
typedef struct smolu_field smolu_field;

/* Message of the last failing call on this thread ("" if none). */
SMOLU_API const char* smolu_last_error(void);
SMOLU_API const char* smolu_version(void);

/* ---- configuration ---- */
SMOLU_API smolu_status smolu_config_new(smolu_config** out);
SMOLU_API smolu_status smolu_config_load(const char* path, smolu_config** out);
SMOLU_API smolu_status smolu_config_parse(const char* text, smolu_config** out);
SMOLU_API void smolu_config_free(smolu_config* cfg);
/* "section.key=value" */
SMOLU_API smolu_status smolu_config_set(smolu_config* cfg, const char* assignment);
SMOLU_API smolu_status smolu_config_validate(const smolu_config* cfg);
/* Resolved text; the pointer stays valid until the next call on cfg. */
SMOLU_API const char* smolu_config_text(smolu_config* cfg);

/* ---- particle system ---- */
SMOLU_API smolu_status smolu_sim_new(const smolu_config* cfg, smolu_sim** out);
SMOLU_API void smolu_sim_free(smolu_sim* sim);
/* Advances by n steps of sim.dt (clipped at T). */
SMOLU_API smolu_status smolu_sim_advance(smolu_sim* sim, int64_t n);
SMOLU_API double smolu_sim_time(const smolu_sim* sim);
SMOLU_API int64_t smolu_sim_active(const smolu_sim* sim);
SMOLU_API int64_t smolu_sim_events(const smolu_sim* sim);
SMOLU_API int64_t smolu_sim_count_mass(const smolu_sim* sim, int m);
/* Copies positions of mass-m particles; returns the count (buffer may be
 * NULL to query). */
SMOLU_API int64_t smolu_sim_positions(const smolu_sim* sim, int m, double* buf,
                                      size_t buf_len);

/* ---- grid solver ---- */
SMOLU_API smolu_status smolu_field_new(const smolu_config* cfg, smolu_field** out);
SMOLU_API void smolu_field_free(smolu_field* field);
SMOLU_API smolu_status smolu_field_advance(smolu_field* field, int64_t n);
SMOLU_API double smolu_field_time(const smolu_field* field);
SMOLU_API double smolu_field_integral(const smolu_field* field, int m);
SMOLU_API double smolu_field_sup(const smolu_field* field, int m);

/* ---- subcommands; outputs go to output_dir ---- */
SMOLU_API smolu_status smolu_run_simulate(const smolu_config* cfg, const char* output_dir);
SMOLU_API smolu_status smolu_run_solve(const smolu_config* cfg, const char* output_dir);
SMOLU_API smolu_status smolu_run_converge(const smolu_config* cfg, const char* output_dir,
                                          int verbose);
SMOLU_API smolu_status smolu_run_oracle(const smolu_config* cfg, const char* output_dir,
                                        double* max_rel_err);
SMOLU_API smolu_status smolu_run_auxpde(const smolu_config* cfg, const char* output_dir,
                                        double* r_squared);
/* SMOLU_ERR_CHECK_FAILED when the audit finds a violation. */
SMOLU_API smolu_status smolu_run_audit(const smolu_config* cfg, const char* output_dir);

/* Resolves a run directory (honours SMOLU_OUTPUT_ROOT); pointer valid until
 * the next call on this thread. */
SMOLU_API const char* smolu_output_dir(const char* dir);

#ifdef __cplusplus
}
#endif

#endif /* SMOLU_SMOLU_H_ */
