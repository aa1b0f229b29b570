/* Copyright 2026 The Devissage Authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * C interface to the devissage simulation library.
 *
 * A session holds configuration (key = value strings) and a worker count.
 * dv_run executes a named experiment and hands back a result holding CSV
 * tables and a JSON summary. All functions return a dv_status; on failure
 * dv_last_error() describes the problem for the calling thread.
 */
#ifndef DEVISSAGE_DEVISSAGE_H
#define DEVISSAGE_DEVISSAGE_H

#include <stddef.h>

#if defined(DEVISSAGE_BUILDING_LIBRARY)
#define DV_API __attribute__((visibility("default")))
#else
#define DV_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef struct dv_session dv_session;
typedef struct dv_result dv_result;

typedef enum dv_status {
  DV_OK = 0,
  DV_ERR_RUNTIME = 1,  /* simulation failure, e.g. a non-finite state */
  DV_ERR_CONFIG = 2,   /* unknown key or invalid value */
  DV_ERR_ARGUMENT = 3, /* null pointer, index out of range, dimension mismatch */
  DV_ERR_INTERNAL = 4
} dv_status;

DV_API const char* dv_version(void);
DV_API const char* dv_status_name(dv_status status);
/* Message of the last failed call on this thread; "" if none. */
DV_API const char* dv_last_error(void);
/* Offending configuration key of the last DV_ERR_CONFIG on this thread; "" if none. */
DV_API const char* dv_last_error_key(void);

DV_API dv_status dv_session_create(dv_session** out);
DV_API void dv_session_destroy(dv_session* session);
/* 0 means DEVISSAGE_THREADS, then the hardware concurrency. */
DV_API dv_status dv_session_set_threads(dv_session* session, int threads);
DV_API dv_status dv_config_set(dv_session* session, const char* key, const char* value);
DV_API dv_status dv_config_load(dv_session* session, const char* path);
DV_API dv_status dv_config_clear(dv_session* session);

DV_API size_t dv_experiment_count(void);
DV_API const char* dv_experiment_name(size_t index);
DV_API dv_status dv_run(dv_session* session, const char* experiment, dv_result** out);

DV_API size_t dv_result_table_count(const dv_result* result);
DV_API const char* dv_result_table_name(const dv_result* result, size_t index);
/* The CSV text stays owned by the result. */
DV_API dv_status dv_result_table_csv(const dv_result* result, size_t index, const char** csv, size_t* length);
DV_API const char* dv_result_summary_json(const dv_result* result);
DV_API void dv_result_destroy(dv_result* result);

/* Minkowski helpers. Vectors of R^{1,d} have d + 1 components. */
DV_API dv_status dv_lorentz_form(const double* xi, const double* eta, size_t components, double* out);
/* out receives d + 1 components; h has d - 1. */
DV_API dv_status dv_iwasawa_point(double alpha, const double* h, size_t h_length, double* out);
/* out receives h_length + 1 components. */
DV_API dv_status dv_stereographic(const double* h, size_t h_length, double* out);

#ifdef __cplusplus
}
#endif

#endif
