/* Copyright 2026 The gcalb Authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * C interface to the gcalb library: adaptive local basis construction by
 * randomized range finding on a rational filter, interior-penalty DG
 * eigensolves, and the 1D Hartree-Fock-like SCF model.
 *
 * All functions return a gcalb_status. On failure a message is available
 * from gcalb_last_error() on the same thread until the next call that fails.
 * Handles are opaque; every *_create/run call that returns GCALB_OK (or
 * GCALB_NOT_CONVERGED from gcalb_run) transfers ownership of one handle,
 * which must be released with the matching *_destroy function.
 * Handles are not synchronized: use one handle from one thread at a time.
 */
#ifndef GCALB_GCALB_H
#define GCALB_GCALB_H

#include <stddef.h>

#if defined(GCALB_BUILDING_LIBRARY)
#define GCALB_API __attribute__((visibility("default")))
#else
#define GCALB_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum gcalb_status
{
  GCALB_OK = 0,
  GCALB_INVALID_ARGUMENT = 1,
  GCALB_NOT_CONVERGED = 2,
  GCALB_UNSUPPORTED = 3,
  GCALB_NUMERICAL_ERROR = 4,
  GCALB_IO_ERROR = 5,
  GCALB_INTERNAL_ERROR = 6
} gcalb_status;

typedef struct gcalb_config gcalb_config;
typedef struct gcalb_result gcalb_result;
typedef struct gcalb_filter gcalb_filter;

typedef struct gcalb_row
{
  const char *method; /* valid while the result handle lives */
  int n_b;
  double err;
  double t_basis_s;
  double t_dg_s;
  double n_tot_iter;
  size_t dofs;
} gcalb_row;

typedef struct gcalb_scf_outer
{
  int outer;
  int inner_iterations;
  double exchange_energy;
  double relative_change;
} gcalb_scf_outer;

GCALB_API const char *gcalb_version(void);
GCALB_API const char *gcalb_last_error(void);
GCALB_API const char *gcalb_status_name(gcalb_status status);

/* Configuration with the defaults of one experiment
 * ("lin1d", "lin2d", "lin3d", "weak2d", "scf1d"). */
GCALB_API gcalb_status gcalb_config_create(const char *experiment, gcalb_config **out);
/* Configuration read from a JSON file. */
GCALB_API gcalb_status gcalb_config_load(const char *path, gcalb_config **out);
/* Sets a dotted key, e.g. ("grid.points", "140") or ("methods", "gcalb,opt").
 * The configuration is left unchanged when the key, the value or the
 * resulting configuration is invalid. */
GCALB_API gcalb_status gcalb_config_set(gcalb_config *cfg, const char *key, const char *value);
/* Writes the 16 hex digit configuration hash plus a terminating NUL; len >= 17. */
GCALB_API gcalb_status gcalb_config_hash(const gcalb_config *cfg, char *buf, size_t len);
GCALB_API void gcalb_config_destroy(gcalb_config *cfg);

/* Runs the configured experiment. When an SCF run stops without meeting its
 * tolerance the result is still produced and GCALB_NOT_CONVERGED returned. */
GCALB_API gcalb_status gcalb_run(const gcalb_config *cfg, gcalb_result **out);
GCALB_API gcalb_status gcalb_result_row_count(const gcalb_result *res, size_t *count);
GCALB_API gcalb_status gcalb_result_row(const gcalb_result *res, size_t index, gcalb_row *row);
/* Outer-iteration records of SCF run `run` (0-based, in method order). */
GCALB_API gcalb_status gcalb_result_scf_count(const gcalb_result *res, size_t run, size_t *count);
GCALB_API gcalb_status gcalb_result_scf_outer(const gcalb_result *res, size_t run, size_t index,
                                              gcalb_scf_outer *record);
/* format: "csv" or "json" */
GCALB_API gcalb_status gcalb_result_write(const gcalb_result *res, const char *path, const char *format);
GCALB_API void gcalb_result_destroy(gcalb_result *res);

/* Modified Zolotarev filter approximating the indicator of [a, b] with gaps
 * (a_minus, a) and (b, b_plus); pass -INFINITY for a_minus to drop the lower gap. */
GCALB_API gcalb_status gcalb_filter_create(double a_minus, double a, double b, double b_plus, int poles,
                                           gcalb_filter **out);
GCALB_API gcalb_status gcalb_filter_eval(const gcalb_filter *f, double x, double *value);
/* Pole count, the constant term, and the poles and weights in the upper half
 * plane. Arrays may be NULL; otherwise they need room for the pole count. */
GCALB_API gcalb_status gcalb_filter_poles(const gcalb_filter *f, size_t *count, double *constant, double *pole_re,
                                          double *pole_im, double *weight_re, double *weight_im);
GCALB_API void gcalb_filter_destroy(gcalb_filter *f);

#ifdef __cplusplus
}
#endif

#endif /* GCALB_GCALB_H */
