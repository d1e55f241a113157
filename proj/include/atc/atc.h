// Copyright 2026 The atc-opt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/* C interface to the atomistic-to-continuum coupling library.
 *
 * Objects are opaque handles owned by the caller and released with the
 * matching destroy function. Every fallible call returns an atc_status; on
 * failure atc_last_error() describes the problem for the calling thread.
 * Strings returned through char** are released with atc_string_free. */
#ifndef ATC_ATC_H_
#define ATC_ATC_H_

#include <stddef.h>
#include <stdint.h>

#if defined(ATC_BUILDING_LIBRARY)
#define ATC_API __attribute__((visibility("default")))
#else
#define ATC_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum atc_status {
  ATC_OK = 0,
  ATC_ERR_INVALID_ARGUMENT = 1,
  ATC_ERR_VERIFICATION = 2,
  ATC_ERR_SOLVER = 3,
  ATC_ERR_IO = 4,
  ATC_ERR_INTERNAL = 5
} atc_status;

typedef enum atc_field {
  ATC_FIELD_COUPLED = 0,    /* u_atc on [0, N] */
  ATC_FIELD_ATOMISTIC = 1,  /* u_a_op on [0, L] */
  ATC_FIELD_CONTINUUM = 2   /* u_c_op on [K, N-1] */
} atc_field;

typedef enum atc_load_scaling {
  ATC_LOAD_LATTICE = 0,
  ATC_LOAD_CONTINUUM = 1 /* load multiplied by 1/N^2 */
} atc_load_scaling;

typedef struct atc_chain atc_chain;
typedef struct atc_decomposition atc_decomposition;
typedef struct atc_result atc_result;

typedef struct atc_sweep_config {
  const int* n_values;
  size_t n_count;
  double p;
  double gamma;
  double c;
  double k1;
  double k2;
  const char* force; /* text form, e.g. "sine:1" */
  atc_load_scaling load_scaling;
  unsigned threads; /* 0: ATC_NUM_THREADS or hardware */
} atc_sweep_config;

ATC_API const char* atc_version(void);
ATC_API const char* atc_last_error(void);
ATC_API void atc_string_free(char* s);

/* Chain of atoms 0..n. force is "zero", "point:<i>:<m>", "sine:<m>" or
 * "poly:<c0>,<c1>,...". */
ATC_API atc_status atc_chain_create(int n, double k1, double k2, const char* force,
                                    atc_chain** out);
/* Per-atom loads; length must be n + 1. */
ATC_API atc_status atc_chain_create_from_table(int n, double k1, double k2,
                                               const double* forces, size_t length,
                                               atc_chain** out);
/* Per-atom loads read from a CSV file. */
ATC_API atc_status atc_chain_create_from_file(int n, double k1, double k2, const char* path,
                                              atc_chain** out);
ATC_API void atc_chain_destroy(atc_chain* chain);

ATC_API atc_status atc_decomposition_create(const atc_chain* chain, int k, int l,
                                            atc_decomposition** out);
ATC_API void atc_decomposition_destroy(atc_decomposition* decomp);
/* Advisory size/overlap screening; *ok is 0 and *warnings lists the reasons
 * when an assumption is violated. */
ATC_API atc_status atc_check_assumptions(const atc_decomposition* decomp, double p, double c,
                                         int* ok, char** warnings);

ATC_API atc_status atc_solve(const atc_chain* chain, const atc_decomposition* decomp,
                             atc_result** out);
ATC_API void atc_result_destroy(atc_result* result);
/* controls[3] = (theta at L-1, theta at L, theta at K). */
ATC_API atc_status atc_result_controls(const atc_result* result, double* controls);
ATC_API atc_status atc_result_mismatch(const atc_result* result, double* mismatch);
ATC_API atc_status atc_result_field_range(const atc_result* result, atc_field which, int* lo,
                                          int* hi);
/* Copies hi - lo + 1 values into values; length is the buffer capacity. */
ATC_API atc_status atc_result_field(const atc_result* result, atc_field which, double* values,
                                    size_t length);
ATC_API atc_status atc_result_csv(const atc_result* result, char** csv);
ATC_API atc_status atc_result_summary(const atc_result* result, char** json);

/* Variant with the atomistic operator on the continuum side. controls[4] =
 * (L-1, L, K, K+1); u_atc has n + 1 entries. */
ATC_API atc_status atc_solve_consistent(const atc_chain* chain, const atc_decomposition* decomp,
                                        double* controls, double* u_atc, size_t length);

/* Global atomistic reference solution, n + 1 entries. */
ATC_API atc_status atc_solve_reference(const atc_chain* chain, double* u, size_t length);

/* Uniform-strain test on a zero-load chain. */
ATC_API atc_status atc_patch_test(const atc_chain* chain, const atc_decomposition* decomp,
                                  double strain, int* passed, char** report);

ATC_API atc_status atc_q_norm(const atc_chain* chain, const atc_decomposition* decomp,
                              double* q_norm);

/* Full invariant battery; *all_passed is 1 when every check passes. */
ATC_API atc_status atc_verify(const atc_chain* chain, const atc_decomposition* decomp,
                              uint64_t seed, int* all_passed, char** scorecard);

/* Convergence sweep; *csv holds the row table and *report the JSON summary.
 * Either output pointer may be NULL. */
ATC_API atc_status atc_sweep(const atc_sweep_config* config, char** csv, char** report);

/* Replaces path atomically with the given text. */
ATC_API atc_status atc_write_file(const char* path, const char* text);

#ifdef __cplusplus
}
#endif

#endif /* ATC_ATC_H_ */
