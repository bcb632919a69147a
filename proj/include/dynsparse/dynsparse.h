/*
 * Copyright 2026 The dynsparse Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/*
 * C interface to libdynsparse.
 *
 * Every function returns a dynsparse_status; on failure a description is
 * available from dynsparse_last_error() on the calling thread until the next
 * call. Objects are opaque handles released with their *_destroy function.
 * Matrix handles share storage after dynsparse_matrix_shallow_copy or
 * dynsparse_matrix_create_mirror; the storage lives until the last handle
 * referencing it is destroyed.
 */

#ifndef DYNSPARSE_H
#define DYNSPARSE_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  ifdef DYNSPARSE_BUILDING
#    define DYNSPARSE_API __declspec(dllexport)
#  else
#    define DYNSPARSE_API __declspec(dllimport)
#  endif
#else
#  define DYNSPARSE_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dynsparse_status {
  DYNSPARSE_OK = 0,
  DYNSPARSE_ERR_INDEX_OUT_OF_RANGE = 1,
  DYNSPARSE_ERR_LENGTH_MISMATCH = 2,
  DYNSPARSE_ERR_NON_MONOTONE_OFFSETS = 3,
  DYNSPARSE_ERR_UNSORTED_ROW = 4,
  DYNSPARSE_ERR_DUPLICATE_OFFSET = 5,
  DYNSPARSE_ERR_UNSORTED_OFFSETS = 6,
  DYNSPARSE_ERR_SHAPE_MISMATCH = 7,
  DYNSPARSE_ERR_NONZERO_PADDING = 8,
  DYNSPARSE_ERR_UNKNOWN_FORMAT = 9,
  DYNSPARSE_ERR_TYPE_MISMATCH = 10,
  DYNSPARSE_ERR_INCOMPATIBLE_CONTAINERS = 11,
  DYNSPARSE_ERR_DIA_FILL_OVERFLOW = 12,
  DYNSPARSE_ERR_PARSE = 13,
  DYNSPARSE_ERR_IO = 14,
  DYNSPARSE_ERR_DIMENSION_MISMATCH = 15,
  DYNSPARSE_ERR_STRUCTURALLY_ABSENT_DIAGONAL = 16,
  DYNSPARSE_ERR_BREAKDOWN_ZERO_CURVATURE = 17,
  DYNSPARSE_ERR_VALIDATION_FAILED = 18,
  DYNSPARSE_ERR_EMPTY_SEARCH_SPACE = 19,
  DYNSPARSE_ERR_INVALID_ARGUMENT = 20,
  DYNSPARSE_ERR_NULL_ARGUMENT = 100,
  DYNSPARSE_ERR_OUT_OF_MEMORY = 101,
  DYNSPARSE_ERR_INTERNAL = 102
} dynsparse_status;

/* Stable index mapping. */
typedef enum dynsparse_format {
  DYNSPARSE_FORMAT_COO = 0,
  DYNSPARSE_FORMAT_CSR = 1,
  DYNSPARSE_FORMAT_DIA = 2
} dynsparse_format;

typedef enum dynsparse_backend_kind {
  DYNSPARSE_BACKEND_SERIAL = 0,
  DYNSPARSE_BACKEND_THREADED = 1
} dynsparse_backend_kind;

typedef struct dynsparse_backend {
  dynsparse_backend_kind kind;
  int nthreads; /* ignored for serial; must be >= 1 for threaded */
} dynsparse_backend;

typedef enum dynsparse_mode {
  DYNSPARSE_MODE_FIXED = 0,
  DYNSPARSE_MODE_MORPHEUS = 1,
  DYNSPARSE_MODE_GHOST = 2,
  DYNSPARSE_MODE_MULTI = 3
} dynsparse_mode;

typedef enum dynsparse_report_format {
  DYNSPARSE_REPORT_JSON = 0,
  DYNSPARSE_REPORT_CSV = 1
} dynsparse_report_format;

typedef struct dynsparse_matrix dynsparse_matrix;
typedef struct dynsparse_problem dynsparse_problem;
typedef struct dynsparse_timing_table dynsparse_timing_table;
typedef struct dynsparse_report dynsparse_report;

DYNSPARSE_API const char* dynsparse_version(void);
DYNSPARSE_API const char* dynsparse_last_error(void);
DYNSPARSE_API const char* dynsparse_status_name(dynsparse_status status);

/* ---- Matrices -------------------------------------------------------- */

DYNSPARSE_API dynsparse_status dynsparse_matrix_create_coo(int64_t nrows, int64_t ncols,
                                                           int64_t nnz, const int64_t* rows,
                                                           const int64_t* cols,
                                                           const double* values,
                                                           dynsparse_matrix** out);
/* row_offsets has nrows + 1 entries; nnz = row_offsets[nrows] entries follow. */
DYNSPARSE_API dynsparse_status dynsparse_matrix_create_csr(int64_t nrows, int64_t ncols,
                                                           const int64_t* row_offsets,
                                                           int64_t nnz, const int64_t* cols,
                                                           const double* values,
                                                           dynsparse_matrix** out);
/* values is row-major nrows x ndiags: values[i * ndiags + j] is the entry of
   row i on diagonal offsets[j]. */
DYNSPARSE_API dynsparse_status dynsparse_matrix_create_dia(int64_t nrows, int64_t ncols,
                                                           int64_t ndiags, const int64_t* offsets,
                                                           const double* values,
                                                           dynsparse_matrix** out);
DYNSPARSE_API dynsparse_status dynsparse_matrix_read_matrix_market(const char* path,
                                                                   dynsparse_matrix** out);
DYNSPARSE_API dynsparse_status dynsparse_matrix_write_matrix_market(const dynsparse_matrix* m,
                                                                    const char* path);
DYNSPARSE_API void dynsparse_matrix_destroy(dynsparse_matrix* m);

DYNSPARSE_API dynsparse_status dynsparse_matrix_info(const dynsparse_matrix* m,
                                                     dynsparse_format* active, int64_t* nrows,
                                                     int64_t* ncols, int64_t* nnz);
/* Number of handles sharing m's storage. */
DYNSPARSE_API dynsparse_status dynsparse_matrix_use_count(const dynsparse_matrix* m, long* out);

/* Switches format and discards the data (empty 0x0 container). */
DYNSPARSE_API dynsparse_status dynsparse_matrix_activate(dynsparse_matrix* m, int format_index);
/* Data-preserving format switch. dia_fill_limit <= 0 selects the default. */
DYNSPARSE_API dynsparse_status dynsparse_matrix_convert(dynsparse_matrix* m, int format_index,
                                                        int64_t dia_fill_limit);

/* dst must have src's active format; afterwards dst aliases src's storage. */
DYNSPARSE_API dynsparse_status dynsparse_matrix_shallow_copy(const dynsparse_matrix* src,
                                                             dynsparse_matrix* dst);
/* Bitwise copy into dst's existing, compatible storage. */
DYNSPARSE_API dynsparse_status dynsparse_matrix_deep_copy(const dynsparse_matrix* src,
                                                          dynsparse_matrix* dst);
/* Independent copy with its own storage. */
DYNSPARSE_API dynsparse_status dynsparse_matrix_clone(const dynsparse_matrix* src,
                                                      dynsparse_matrix** out);
/* Host mirror; aliases src because the matrix already lives on the host. */
DYNSPARSE_API dynsparse_status dynsparse_matrix_create_mirror(const dynsparse_matrix* src,
                                                              dynsparse_matrix** out);

/* Writes up to `capacity` structural nonzeros; *count receives the total.
   Any of rows/cols/values may be NULL to only query the count. */
DYNSPARSE_API dynsparse_status dynsparse_matrix_entries(const dynsparse_matrix* m,
                                                        int64_t capacity, int64_t* rows,
                                                        int64_t* cols, double* values,
                                                        int64_t* count);

/* ---- Kernels ---------------------------------------------------------- */

DYNSPARSE_API dynsparse_status dynsparse_spmv(dynsparse_backend backend,
                                              const dynsparse_matrix* a, const double* x,
                                              int64_t x_len, double* y, int64_t y_len);
DYNSPARSE_API dynsparse_status dynsparse_spmv_add(dynsparse_backend backend,
                                                  const dynsparse_matrix* a, const double* x,
                                                  int64_t x_len, double* y, int64_t y_len);
DYNSPARSE_API dynsparse_status dynsparse_dot(dynsparse_backend backend, const double* x,
                                             const double* y, int64_t n, double* out);
DYNSPARSE_API dynsparse_status dynsparse_waxpby(dynsparse_backend backend, double alpha,
                                                const double* x, double beta, const double* y,
                                                double* w, int64_t n);
DYNSPARSE_API dynsparse_status dynsparse_reduce(dynsparse_backend backend, const double* x,
                                                int64_t n, double* out);
DYNSPARSE_API dynsparse_status dynsparse_scan(dynsparse_backend backend, const double* x,
                                              int64_t n, double* out);
DYNSPARSE_API dynsparse_status dynsparse_extract_diagonal(const dynsparse_matrix* a, double* out,
                                                          int64_t n);
DYNSPARSE_API dynsparse_status dynsparse_update_diagonal(dynsparse_matrix* a, const double* d,
                                                         int64_t n);
DYNSPARSE_API dynsparse_status dynsparse_cg(dynsparse_backend backend, const dynsparse_matrix* a,
                                            const double* b, const double* x0, int64_t n,
                                            double tol, int64_t max_iters, double* x_out,
                                            int64_t* iterations, int* converged);

/* ---- Stencil problems ------------------------------------------------- */

typedef struct dynsparse_grid {
  int64_t nx, ny, nz; /* points per partition */
  int px, py, pz;     /* partitions per dimension */
} dynsparse_grid;

/* Generates the partitioned problem and its local/remote split (all CSR).
   Global vectors below are indexed by global grid point id
   gx + NX * (gy + NY * gz). */
DYNSPARSE_API dynsparse_status dynsparse_problem_create(const dynsparse_grid* grid,
                                                        dynsparse_problem** out);
DYNSPARSE_API void dynsparse_problem_destroy(dynsparse_problem* p);
DYNSPARSE_API dynsparse_status dynsparse_problem_num_partitions(const dynsparse_problem* p,
                                                                int* out);
DYNSPARSE_API dynsparse_status dynsparse_problem_global_rows(const dynsparse_problem* p,
                                                             int64_t* out);
DYNSPARSE_API dynsparse_status dynsparse_problem_partition_info(const dynsparse_problem* p,
                                                                int partition, int64_t* local_n,
                                                                int64_t* ghost_count,
                                                                int64_t* local_nnz,
                                                                int64_t* remote_nnz);
DYNSPARSE_API dynsparse_status dynsparse_problem_set_formats(dynsparse_problem* p, int partition,
                                                             int local_format, int remote_format,
                                                             int64_t dia_fill_limit);
DYNSPARSE_API dynsparse_status dynsparse_problem_get_formats(const dynsparse_problem* p,
                                                             int partition, int* local_format,
                                                             int* remote_format);
DYNSPARSE_API dynsparse_status dynsparse_problem_rhs(const dynsparse_problem* p, double* b,
                                                     int64_t n);
/* y = A x over the whole decomposed system, including the halo exchange. */
DYNSPARSE_API dynsparse_status dynsparse_problem_spmv(dynsparse_backend backend,
                                                      const dynsparse_problem* p,
                                                      const double* x, double* y, int64_t n);
DYNSPARSE_API dynsparse_status dynsparse_problem_cg(dynsparse_backend backend,
                                                    const dynsparse_problem* p, double tol,
                                                    int64_t max_iters, double* x, int64_t n,
                                                    int64_t* iterations, int* converged,
                                                    double* relative_residual);
DYNSPARSE_API dynsparse_status dynsparse_problem_validate(dynsparse_backend backend,
                                                          dynsparse_problem* p,
                                                          int64_t* iterations, int* passed);

/* ---- Tuner ------------------------------------------------------------ */

DYNSPARSE_API dynsparse_status dynsparse_profile_formats(dynsparse_backend backend,
                                                         dynsparse_problem* p, int reps,
                                                         int64_t dia_fill_limit,
                                                         dynsparse_timing_table** out);
DYNSPARSE_API dynsparse_status dynsparse_timing_table_create(int npartitions, int reps,
                                                             dynsparse_timing_table** out);
DYNSPARSE_API void dynsparse_timing_table_destroy(dynsparse_timing_table* t);
DYNSPARSE_API dynsparse_status dynsparse_timing_table_set(dynsparse_timing_table* t,
                                                          int partition, int local_format,
                                                          int remote_format, double seconds);
DYNSPARSE_API dynsparse_status dynsparse_timing_table_get(const dynsparse_timing_table* t,
                                                          int partition, int local_format,
                                                          int remote_format, double* seconds,
                                                          int* present);
DYNSPARSE_API dynsparse_status dynsparse_timing_table_skip(dynsparse_timing_table* t,
                                                           int local_format, int remote_format);
DYNSPARSE_API dynsparse_status dynsparse_timing_table_is_skipped(const dynsparse_timing_table* t,
                                                                 int local_format,
                                                                 int remote_format, int* out);
DYNSPARSE_API dynsparse_status dynsparse_timing_table_num_partitions(
    const dynsparse_timing_table* t, int* out);
DYNSPARSE_API dynsparse_status dynsparse_timing_table_read_csv(const char* path,
                                                               dynsparse_timing_table** out);
DYNSPARSE_API dynsparse_status dynsparse_timing_table_write_csv(const dynsparse_timing_table* t,
                                                                const char* path);
/* Fills local_formats/remote_formats (each `capacity` long, capacity >= the
   table's partition count) with the selected plan. */
DYNSPARSE_API dynsparse_status dynsparse_select_plan(const dynsparse_timing_table* t,
                                                     dynsparse_mode mode, int* local_formats,
                                                     int* remote_formats, int capacity);

/* ---- Benchmark -------------------------------------------------------- */

typedef struct dynsparse_bench_config {
  int64_t nx, ny, nz;
  int px, py, pz;
  dynsparse_mode mode;
  int local_format;
  int remote_format;
  int64_t iters;
  int reps;
  int tune;
  dynsparse_backend backend;
  double cg_tol;
  int64_t cg_max_iters;
  uint64_t seed;
  int64_t dia_fill_limit;   /* <= 0: default */
  const char* table_input;  /* NULL: profile */
  const char* table_output; /* NULL: do not export */
} dynsparse_bench_config;

DYNSPARSE_API void dynsparse_bench_config_init(dynsparse_bench_config* cfg);

/* Runs all phases. Validation failures and conversion errors are recorded
   in the report (see dynsparse_report_exit_code) rather than returned. */
DYNSPARSE_API dynsparse_status dynsparse_run_benchmark(const dynsparse_bench_config* cfg,
                                                       dynsparse_report** out);
DYNSPARSE_API void dynsparse_report_destroy(dynsparse_report* r);
/* 0 ok, 2 validation failed, 3 conversion or tuning error. */
DYNSPARSE_API int dynsparse_report_exit_code(const dynsparse_report* r);
/* path NULL or "" writes to standard output. */
DYNSPARSE_API dynsparse_status dynsparse_report_write(const dynsparse_report* r,
                                                      dynsparse_report_format format,
                                                      const char* path);
/* Serialized report, valid until r is destroyed. */
DYNSPARSE_API const char* dynsparse_report_text(const dynsparse_report* r,
                                                dynsparse_report_format format);
DYNSPARSE_API dynsparse_status dynsparse_report_parse(const char* text,
                                                      dynsparse_report_format format,
                                                      dynsparse_report** out);

#ifdef __cplusplus
}
#endif

#endif /* DYNSPARSE_H */
