// Copyright 2026 The dynsparse Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dynsparse/dynsparse.h"

#include <cmath>
#include <fstream>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "dynsparse/bench.hpp"
#include "dynsparse/datamove.hpp"
#include "dynsparse/kernels.hpp"
#include "dynsparse/solver.hpp"
#include "dynsparse/stencil.hpp"
#include "dynsparse/tuner.hpp"

namespace ds = dynsparse;

struct dynsparse_matrix {
  ds::DynamicMatrix m;
};

struct dynsparse_problem {
  ds::PartitionedProblem problem;
  std::vector<ds::SplitMatrix> splits;
};

struct dynsparse_timing_table {
  ds::TimingTable table;
};

struct dynsparse_report {
  ds::RunReport report;
  mutable std::string json;
  mutable std::string csv;
};

namespace {

thread_local std::string g_last_error;

dynsparse_status fail(dynsparse_status s, std::string msg) {
  g_last_error = std::move(msg);
  return s;
}

template <typename F>
dynsparse_status guarded(F&& f) {
  try {
    g_last_error.clear();
    f();
    return DYNSPARSE_OK;
  } catch (const ds::Error& e) {
    return fail(static_cast<dynsparse_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(DYNSPARSE_ERR_OUT_OF_MEMORY, "out of memory");
  } catch (const std::exception& e) {
    return fail(DYNSPARSE_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(DYNSPARSE_ERR_INTERNAL, "unknown error");
  }
}

ds::ExecBackend to_backend(dynsparse_backend b) {
  if (b.kind == DYNSPARSE_BACKEND_THREADED) return ds::ExecBackend::threaded(b.nthreads);
  if (b.kind == DYNSPARSE_BACKEND_SERIAL) return ds::ExecBackend::serial();
  throw ds::Error(ds::ErrorCode::InvalidArgument, "unknown backend kind");
}

ds::FormatId to_format(int index) { return ds::format_from_index(index); }

ds::ConvertOptions to_options(int64_t fill_limit) {
  ds::ConvertOptions o;
  if (fill_limit > 0) o.dia_fill_limit = static_cast<ds::index_t>(fill_limit);
  return o;
}

std::size_t checked_len(int64_t n) {
  if (n < 0) throw ds::Error(ds::ErrorCode::InvalidArgument, "negative length");
  return static_cast<std::size_t>(n);
}

template <typename T>
std::vector<ds::index_t> to_index(const T* p, int64_t n) {
  std::vector<ds::index_t> out(checked_len(n));
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = static_cast<ds::index_t>(p[i]);
  return out;
}

const ds::Partition& partition_at(const dynsparse_problem* p, int r) {
  if (r < 0 || r >= p->problem.npartitions())
    throw ds::Error(ds::ErrorCode::IndexOutOfRange, "partition " + std::to_string(r), r);
  return p->problem.partitions[static_cast<std::size_t>(r)];
}

void require_global_len(const dynsparse_problem* p, int64_t n) {
  if (n != p->problem.global_rows())
    throw ds::Error(ds::ErrorCode::DimensionMismatch,
                    "global vector length " + std::to_string(n) + " != " +
                        std::to_string(p->problem.global_rows()));
}

}  // namespace

extern "C" {

const char* dynsparse_version(void) { return "0.1.0"; }

const char* dynsparse_last_error(void) { return g_last_error.c_str(); }

const char* dynsparse_status_name(dynsparse_status status) {
  switch (status) {
    case DYNSPARSE_OK: return "ok";
    case DYNSPARSE_ERR_NULL_ARGUMENT: return "null_argument";
    case DYNSPARSE_ERR_OUT_OF_MEMORY: return "out_of_memory";
    case DYNSPARSE_ERR_INTERNAL: return "internal";
    default: break;
  }
  const int v = static_cast<int>(status);
  if (v >= 1 && v <= static_cast<int>(ds::ErrorCode::InvalidArgument))
    return ds::error_code_name(static_cast<ds::ErrorCode>(v)).data();
  return "unknown";
}

// ---- Matrices ----

dynsparse_status dynsparse_matrix_create_coo(int64_t nrows, int64_t ncols, int64_t nnz,
                                             const int64_t* rows, const int64_t* cols,
                                             const double* values, dynsparse_matrix** out) {
  if (!out || (nnz > 0 && (!rows || !cols || !values)))
    return fail(DYNSPARSE_ERR_NULL_ARGUMENT, "null argument");
  return guarded([&] {
    auto coo = ds::build_coo(nrows, ncols, to_index(rows, nnz), to_index(cols, nnz),
                             std::vector<double>(values, values + checked_len(nnz)));
    *out = new dynsparse_matrix{ds::DynamicMatrix(std::move(coo))};
  });
}

dynsparse_status dynsparse_matrix_create_csr(int64_t nrows, int64_t ncols,
                                             const int64_t* row_offsets, int64_t nnz,
                                             const int64_t* cols, const double* values,
                                             dynsparse_matrix** out) {
  if (!out || !row_offsets || (nnz > 0 && (!cols || !values)))
    return fail(DYNSPARSE_ERR_NULL_ARGUMENT, "null argument");
  return guarded([&] {
    if (nrows < 0) throw ds::Error(ds::ErrorCode::InvalidArgument, "negative nrows");
    auto csr = ds::build_csr(nrows, ncols, to_index(row_offsets, nrows + 1), to_index(cols, nnz),
                             std::vector<double>(values, values + checked_len(nnz)));
    *out = new dynsparse_matrix{ds::DynamicMatrix(std::move(csr))};
  });
}

dynsparse_status dynsparse_matrix_create_dia(int64_t nrows, int64_t ncols, int64_t ndiags,
                                             const int64_t* offsets, const double* values,
                                             dynsparse_matrix** out) {
  if (!out || (ndiags > 0 && nrows > 0 && (!offsets || !values)))
    return fail(DYNSPARSE_ERR_NULL_ARGUMENT, "null argument");
  return guarded([&] {
    const std::size_t nr = checked_len(nrows), nd = checked_len(ndiags);
    ds::DenseMatrix v(static_cast<ds::index_t>(nr), static_cast<ds::index_t>(nd));
    for (std::size_t i = 0; i < nr; ++i)
      for (std::size_t j = 0; j < nd; ++j)
        v(static_cast<ds::index_t>(i), static_cast<ds::index_t>(j)) = values[i * nd + j];
    auto dia = ds::build_dia(nrows, ncols, to_index(offsets, ndiags), v);
    *out = new dynsparse_matrix{ds::DynamicMatrix(std::move(dia))};
  });
}

dynsparse_status dynsparse_matrix_read_matrix_market(const char* path, dynsparse_matrix** out) {
  if (!path || !out) return fail(DYNSPARSE_ERR_NULL_ARGUMENT, "null argument");
  return guarded([&] {
    *out = new dynsparse_matrix{ds::DynamicMatrix(ds::read_matrix_market(std::filesystem::path(path)))};
  });
}

dynsparse_status dynsparse_matrix_write_matrix_market(const dynsparse_matrix* m,
                                                      const char* path) {
  if (!m || !path) return fail(DYNSPARSE_ERR_NULL_ARGUMENT, "null argument");
  return guarded([&] { ds::write_matrix_market(std::filesystem::path(path), m->m); });
}

void dynsparse_matrix_destroy(dynsparse_matrix* m) { delete m; }

dynsparse_status dynsparse_matrix_info(const dynsparse_matrix* m, dynsparse_format* active,
                                       int64_t* nrows, int64_t* ncols, int64_t* nnz) {
  if (!m) return fail(DYNSPARSE_ERR_NULL_ARGUMENT, "null matrix");
  return guarded([&] {
    if (active) *active = static_cast<dynsparse_format>(m->m.active());
    if (nrows) *nrows = m->m.nrows();
    if (ncols) *ncols = m->m.ncols();
    if (nnz) *nnz = m->m.nnz();
  });
}

dynsparse_status dynsparse_matrix_use_count(const dynsparse_matrix* m, long* out) {
  if (!m || !out) return fail(DYNSPARSE_ERR_NULL_ARGUMENT, "null argument");
  return guarded([&] { *out = m->m.visit([](const auto& c) { return c.use_count(); }); });
}

dynsparse_status dynsparse_matrix_activate(dynsparse_matrix* m, int format_index) {
  if (!m) return fail(DYNSPARSE_ERR_NULL_ARGUMENT, "null matrix");
  return guarded([&] { m->m.activate(format_index); });
}

dynsparse_status dynsparse_matrix_convert(dynsparse_matrix* m, int format_index,
                                          int64_t dia_fill_limit) {
  if (!m) return fail(DYNSPARSE_ERR_NULL_ARGUMENT, "null matrix");
  return guarded(
      [&] { ds::convert_inplace(m->m, to_format(format_index), to_options(dia_fill_limit)); });
}

dynsparse_status dynsparse_matrix_shallow_copy(const dynsparse_matrix* src,
                                               dynsparse_matrix* dst) {
  if (!src || !dst) return fail(DYNSPARSE_ERR_NULL_ARGUMENT, "null matrix");
  return guarded([&] { ds::shallow_copy(src->m, dst->m); });
}

dynsparse_status dynsparse_matrix_deep_copy(const dynsparse_matrix* src, dynsparse_matrix* dst) {
  if (!src || !dst) return fail(DYNSPARSE_ERR_NULL_ARGUMENT, "null matrix");
  return guarded([&] { ds::deep_copy(src->m, dst->m); });
}

dynsparse_status dynsparse_matrix_clone(const dynsparse_matrix* src, dynsparse_matrix** out) {
  if (!src || !out) return fail(DYNSPARSE_ERR_NULL_ARGUMENT, "null argument");
  return guarded([&] { *out = new dynsparse_matrix{ds::clone(src->m)}; });
}

dynsparse_status dynsparse_matrix_create_mirror(const dynsparse_matrix* src,
                                                dynsparse_matrix** out) {
  if (!src || !out) return fail(DYNSPARSE_ERR_NULL_ARGUMENT, "null argument");
  return guarded([&] {
    *out = new dynsparse_matrix{ds::create_mirror(src->m, ds::MemorySpace::Host).host};
  });
}

dynsparse_status dynsparse_matrix_entries(const dynsparse_matrix* m, int64_t capacity,
                                          int64_t* rows, int64_t* cols, double* values,
                                          int64_t* count) {
  if (!m || !count) return fail(DYNSPARSE_ERR_NULL_ARGUMENT, "null argument");
  return guarded([&] {
    const auto entries = ds::nonzero_entries(m->m);
    *count = static_cast<int64_t>(entries.size());
    const std::size_t n = std::min(entries.size(), capacity > 0 ? checked_len(capacity) : 0);
    for (std::size_t k = 0; k < n; ++k) {
      if (rows) rows[k] = entries[k].row;
      if (cols) cols[k] = entries[k].col;
      if (values) values[k] = entries[k].value;
    }
  });
}

// ---- Kernels ----

dynsparse_status dynsparse_spmv(dynsparse_backend backend, const dynsparse_matrix* a,
                                const double* x, int64_t x_len, double* y, int64_t y_len) {
  if (!a || (x_len > 0 && !x) || (y_len > 0 && !y))
    return fail(DYNSPARSE_ERR_NULL_ARGUMENT, "null argument");
  return guarded([&] {
    ds::spmv(to_backend(backend), a->m, {x, checked_len(x_len)}, {y, checked_len(y_len)});
  });
}

dynsparse_status dynsparse_spmv_add(dynsparse_backend backend, const dynsparse_matrix* a,
                                    const double* x, int64_t x_len, double* y, int64_t y_len) {
  if (!a || (x_len > 0 && !x) || (y_len > 0 && !y))
    return fail(DYNSPARSE_ERR_NULL_ARGUMENT, "null argument");
  return guarded([&] {
    ds::spmv_add(to_backend(backend), a->m, {x, checked_len(x_len)}, {y, checked_len(y_len)});
  });
}

dynsparse_status dynsparse_dot(dynsparse_backend backend, const double* x, const double* y,
                               int64_t n, double* out) {
  if (!out || (n > 0 && (!x || !y))) return fail(DYNSPARSE_ERR_NULL_ARGUMENT, "null argument");
  return guarded([&] {
    const std::size_t len = checked_len(n);
    *out = ds::dot(to_backend(backend), {x, len}, {y, len});
  });
}

dynsparse_status dynsparse_waxpby(dynsparse_backend backend, double alpha, const double* x,
                                  double beta, const double* y, double* w, int64_t n) {
  if (n > 0 && (!x || !y || !w)) return fail(DYNSPARSE_ERR_NULL_ARGUMENT, "null argument");
  return guarded([&] {
    const std::size_t len = checked_len(n);
    ds::waxpby(to_backend(backend), alpha, {x, len}, beta, {y, len}, {w, len});
  });
}

dynsparse_status dynsparse_reduce(dynsparse_backend backend, const double* x, int64_t n,
                                  double* out) {
  if (!out || (n > 0 && !x)) return fail(DYNSPARSE_ERR_NULL_ARGUMENT, "null argument");
  return guarded([&] { *out = ds::reduce(to_backend(backend), {x, checked_len(n)}); });
}

dynsparse_status dynsparse_scan(dynsparse_backend backend, const double* x, int64_t n,
                                double* out) {
  if (n > 0 && (!x || !out)) return fail(DYNSPARSE_ERR_NULL_ARGUMENT, "null argument");
  return guarded([&] {
    const auto s = ds::scan(to_backend(backend), {x, checked_len(n)});
    std::copy(s.span().begin(), s.span().end(), out);
  });
}

dynsparse_status dynsparse_extract_diagonal(const dynsparse_matrix* a, double* out, int64_t n) {
  if (!a || (n > 0 && !out)) return fail(DYNSPARSE_ERR_NULL_ARGUMENT, "null argument");
  return guarded([&] {
    const auto d = ds::extract_diagonal(a->m);
    if (static_cast<int64_t>(d.size()) != n)
      throw ds::Error(ds::ErrorCode::DimensionMismatch, "diagonal length");
    std::copy(d.span().begin(), d.span().end(), out);
  });
}

dynsparse_status dynsparse_update_diagonal(dynsparse_matrix* a, const double* d, int64_t n) {
  if (!a || (n > 0 && !d)) return fail(DYNSPARSE_ERR_NULL_ARGUMENT, "null argument");
  return guarded([&] { ds::update_diagonal(a->m, {d, checked_len(n)}); });
}

dynsparse_status dynsparse_cg(dynsparse_backend backend, const dynsparse_matrix* a,
                              const double* b, const double* x0, int64_t n, double tol,
                              int64_t max_iters, double* x_out, int64_t* iterations,
                              int* converged) {
  if (!a || (n > 0 && (!b || !x_out))) return fail(DYNSPARSE_ERR_NULL_ARGUMENT, "null argument");
  return guarded([&] {
    const std::size_t len = checked_len(n);
    std::vector<double> zero;
    if (!x0) {
      zero.assign(len, 0.0);
      x0 = zero.data();
    }
    ds::CgOptions o;
    o.tol = tol;
    o.max_iters = max_iters;
    const auto r = ds::cg(to_backend(backend), a->m, {b, len}, {x0, len}, o);
    const auto& x = r.x.front();
    std::copy(x.span().begin(), x.span().end(), x_out);
    if (iterations) *iterations = r.iterations;
    if (converged) *converged = r.converged ? 1 : 0;
  });
}

// ---- Stencil problems ----

dynsparse_status dynsparse_problem_create(const dynsparse_grid* grid, dynsparse_problem** out) {
  if (!grid || !out) return fail(DYNSPARSE_ERR_NULL_ARGUMENT, "null argument");
  return guarded([&] {
    ds::GridSpec g;
    g.nx = grid->nx;
    g.ny = grid->ny;
    g.nz = grid->nz;
    g.px = grid->px;
    g.py = grid->py;
    g.pz = grid->pz;
    auto h = std::make_unique<dynsparse_problem>();
    h->problem = ds::generate_problem(g);
    h->splits = ds::split_all(h->problem);
    *out = h.release();
  });
}

void dynsparse_problem_destroy(dynsparse_problem* p) { delete p; }

dynsparse_status dynsparse_problem_num_partitions(const dynsparse_problem* p, int* out) {
  if (!p || !out) return fail(DYNSPARSE_ERR_NULL_ARGUMENT, "null argument");
  *out = p->problem.npartitions();
  return DYNSPARSE_OK;
}

dynsparse_status dynsparse_problem_global_rows(const dynsparse_problem* p, int64_t* out) {
  if (!p || !out) return fail(DYNSPARSE_ERR_NULL_ARGUMENT, "null argument");
  *out = p->problem.global_rows();
  return DYNSPARSE_OK;
}

dynsparse_status dynsparse_problem_partition_info(const dynsparse_problem* p, int partition,
                                                  int64_t* local_n, int64_t* ghost_count,
                                                  int64_t* local_nnz, int64_t* remote_nnz) {
  if (!p) return fail(DYNSPARSE_ERR_NULL_ARGUMENT, "null problem");
  return guarded([&] {
    const auto& part = partition_at(p, partition);
    const auto& s = p->splits[static_cast<std::size_t>(partition)];
    if (local_n) *local_n = part.local_n;
    if (ghost_count) *ghost_count = part.halo.ghost_count;
    if (local_nnz) *local_nnz = s.local.nnz();
    if (remote_nnz) *remote_nnz = s.remote.nnz();
  });
}

dynsparse_status dynsparse_problem_set_formats(dynsparse_problem* p, int partition,
                                               int local_format, int remote_format,
                                               int64_t dia_fill_limit) {
  if (!p) return fail(DYNSPARSE_ERR_NULL_ARGUMENT, "null problem");
  return guarded([&] {
    partition_at(p, partition);
    auto& s = p->splits[static_cast<std::size_t>(partition)];
    const auto opts = to_options(dia_fill_limit);
    // Convert copies first so a failure leaves the partition unchanged.
    ds::DynamicMatrix local = s.local, remote = s.remote;
    ds::convert_inplace(local, to_format(local_format), opts);
    ds::convert_inplace(remote, to_format(remote_format), opts);
    s.local = std::move(local);
    s.remote = std::move(remote);
  });
}

dynsparse_status dynsparse_problem_get_formats(const dynsparse_problem* p, int partition,
                                               int* local_format, int* remote_format) {
  if (!p) return fail(DYNSPARSE_ERR_NULL_ARGUMENT, "null problem");
  return guarded([&] {
    partition_at(p, partition);
    const auto& s = p->splits[static_cast<std::size_t>(partition)];
    if (local_format) *local_format = static_cast<int>(s.local.active());
    if (remote_format) *remote_format = static_cast<int>(s.remote.active());
  });
}

dynsparse_status dynsparse_problem_rhs(const dynsparse_problem* p, double* b, int64_t n) {
  if (!p || !b) return fail(DYNSPARSE_ERR_NULL_ARGUMENT, "null argument");
  return guarded([&] {
    require_global_len(p, n);
    for (const auto& part : p->problem.partitions)
      for (ds::index_t i = 0; i < part.local_n; ++i)
        b[part.global_ids[static_cast<std::size_t>(i)]] = part.b[i];
  });
}

dynsparse_status dynsparse_problem_spmv(dynsparse_backend backend, const dynsparse_problem* p,
                                        const double* x, double* y, int64_t n) {
  if (!p || !x || !y) return fail(DYNSPARSE_ERR_NULL_ARGUMENT, "null argument");
  return guarded([&] {
    require_global_len(p, n);
    auto xs = ds::scatter_owned(p->problem, {x, checked_len(n)});
    auto ys = ds::make_vectors(p->problem);
    ds::distributed_spmv(to_backend(backend), p->problem, p->splits, xs, ys);
    const auto g = ds::gather_owned(p->problem, ys);
    std::copy(g.span().begin(), g.span().end(), y);
  });
}

dynsparse_status dynsparse_problem_cg(dynsparse_backend backend, const dynsparse_problem* p,
                                      double tol, int64_t max_iters, double* x, int64_t n,
                                      int64_t* iterations, int* converged,
                                      double* relative_residual) {
  if (!p || !x) return fail(DYNSPARSE_ERR_NULL_ARGUMENT, "null argument");
  return guarded([&] {
    require_global_len(p, n);
    ds::PartitionVectors b;
    for (const auto& part : p->problem.partitions) b.push_back(part.b);
    const auto x0 = ds::scatter_owned(p->problem, {x, checked_len(n)});
    ds::CgOptions o;
    o.tol = tol;
    o.max_iters = max_iters;
    const auto r = ds::cg(to_backend(backend), p->problem, p->splits, b, x0, o);
    const auto g = ds::gather_owned(p->problem, r.x);
    std::copy(g.span().begin(), g.span().end(), x);
    if (iterations) *iterations = r.iterations;
    if (converged) *converged = r.converged ? 1 : 0;
    if (relative_residual) *relative_residual = r.residual_history.back();
  });
}

dynsparse_status dynsparse_problem_validate(dynsparse_backend backend, dynsparse_problem* p,
                                            int64_t* iterations, int* passed) {
  if (!p) return fail(DYNSPARSE_ERR_NULL_ARGUMENT, "null problem");
  return guarded([&] {
    const auto r = ds::validate_solver(to_backend(backend), p->problem, p->splits);
    if (iterations) *iterations = r.iterations;
    if (passed) *passed = r.passed ? 1 : 0;
  });
}

// ---- Tuner ----

dynsparse_status dynsparse_profile_formats(dynsparse_backend backend, dynsparse_problem* p,
                                           int reps, int64_t dia_fill_limit,
                                           dynsparse_timing_table** out) {
  if (!p || !out) return fail(DYNSPARSE_ERR_NULL_ARGUMENT, "null argument");
  return guarded([&] {
    auto t = ds::profile_formats(to_backend(backend), p->problem, p->splits, reps,
                                 to_options(dia_fill_limit));
    *out = new dynsparse_timing_table{std::move(t)};
  });
}

dynsparse_status dynsparse_timing_table_create(int npartitions, int reps,
                                               dynsparse_timing_table** out) {
  if (!out) return fail(DYNSPARSE_ERR_NULL_ARGUMENT, "null argument");
  return guarded([&] {
    if (npartitions < 1) throw ds::Error(ds::ErrorCode::InvalidArgument, "npartitions must be >= 1");
    auto* t = new dynsparse_timing_table{};
    t->table.npartitions = npartitions;
    t->table.reps = reps;
    *out = t;
  });
}

void dynsparse_timing_table_destroy(dynsparse_timing_table* t) { delete t; }

dynsparse_status dynsparse_timing_table_set(dynsparse_timing_table* t, int partition,
                                            int local_format, int remote_format,
                                            double seconds) {
  if (!t) return fail(DYNSPARSE_ERR_NULL_ARGUMENT, "null table");
  return guarded([&] {
    if (partition < 0 || partition >= t->table.npartitions)
      throw ds::Error(ds::ErrorCode::IndexOutOfRange, "partition", partition);
    if (!(seconds > 0.0) || !std::isfinite(seconds))
      throw ds::Error(ds::ErrorCode::InvalidArgument, "seconds must be positive and finite");
    t->table.set(partition, {to_format(local_format), to_format(remote_format)}, seconds);
  });
}

dynsparse_status dynsparse_timing_table_get(const dynsparse_timing_table* t, int partition,
                                            int local_format, int remote_format,
                                            double* seconds, int* present) {
  if (!t || !seconds || !present) return fail(DYNSPARSE_ERR_NULL_ARGUMENT, "null argument");
  return guarded([&] {
    const auto v = t->table.get(partition, {to_format(local_format), to_format(remote_format)});
    *present = v ? 1 : 0;
    *seconds = v.value_or(0.0);
  });
}

dynsparse_status dynsparse_timing_table_skip(dynsparse_timing_table* t, int local_format,
                                             int remote_format) {
  if (!t) return fail(DYNSPARSE_ERR_NULL_ARGUMENT, "null table");
  return guarded(
      [&] { t->table.skipped.insert({to_format(local_format), to_format(remote_format)}); });
}

dynsparse_status dynsparse_timing_table_is_skipped(const dynsparse_timing_table* t,
                                                   int local_format, int remote_format,
                                                   int* out) {
  if (!t || !out) return fail(DYNSPARSE_ERR_NULL_ARGUMENT, "null argument");
  return guarded([&] {
    *out = t->table.skipped.count({to_format(local_format), to_format(remote_format)}) ? 1 : 0;
  });
}

dynsparse_status dynsparse_timing_table_num_partitions(const dynsparse_timing_table* t,
                                                       int* out) {
  if (!t || !out) return fail(DYNSPARSE_ERR_NULL_ARGUMENT, "null argument");
  *out = t->table.npartitions;
  return DYNSPARSE_OK;
}

dynsparse_status dynsparse_timing_table_read_csv(const char* path, dynsparse_timing_table** out) {
  if (!path || !out) return fail(DYNSPARSE_ERR_NULL_ARGUMENT, "null argument");
  return guarded([&] {
    std::ifstream in(path);
    if (!in) throw ds::Error(ds::ErrorCode::IoError, std::string("cannot open ") + path);
    *out = new dynsparse_timing_table{ds::read_timing_table_csv(in)};
  });
}

dynsparse_status dynsparse_timing_table_write_csv(const dynsparse_timing_table* t,
                                                  const char* path) {
  if (!t || !path) return fail(DYNSPARSE_ERR_NULL_ARGUMENT, "null argument");
  return guarded([&] {
    std::ofstream out(path);
    if (!out) throw ds::Error(ds::ErrorCode::IoError, std::string("cannot open ") + path);
    ds::write_timing_table_csv(out, t->table);
    if (!out) throw ds::Error(ds::ErrorCode::IoError, std::string("write failed: ") + path);
  });
}

dynsparse_status dynsparse_select_plan(const dynsparse_timing_table* t, dynsparse_mode mode,
                                       int* local_formats, int* remote_formats, int capacity) {
  if (!t || !local_formats || !remote_formats)
    return fail(DYNSPARSE_ERR_NULL_ARGUMENT, "null argument");
  return guarded([&] {
    if (capacity < t->table.npartitions)
      throw ds::Error(ds::ErrorCode::DimensionMismatch, "plan capacity too small");
    if (mode < DYNSPARSE_MODE_FIXED || mode > DYNSPARSE_MODE_MULTI)
      throw ds::Error(ds::ErrorCode::InvalidArgument, "unknown mode");
    const auto plan = ds::select_plan(t->table, static_cast<ds::PlanMode>(mode));
    for (std::size_t r = 0; r < plan.size(); ++r) {
      local_formats[r] = static_cast<int>(plan[r].local);
      remote_formats[r] = static_cast<int>(plan[r].remote);
    }
  });
}

// ---- Benchmark ----

void dynsparse_bench_config_init(dynsparse_bench_config* cfg) {
  if (!cfg) return;
  const ds::BenchConfig d;
  cfg->nx = d.nx;
  cfg->ny = d.ny;
  cfg->nz = d.nz;
  cfg->px = d.px;
  cfg->py = d.py;
  cfg->pz = d.pz;
  cfg->mode = static_cast<dynsparse_mode>(d.mode);
  cfg->local_format = static_cast<int>(d.local_format);
  cfg->remote_format = static_cast<int>(d.remote_format);
  cfg->iters = d.iters;
  cfg->reps = d.reps;
  cfg->tune = d.tune ? 1 : 0;
  cfg->backend.kind = DYNSPARSE_BACKEND_SERIAL;
  cfg->backend.nthreads = d.threads;
  cfg->cg_tol = d.cg_tol;
  cfg->cg_max_iters = d.cg_max_iters;
  cfg->seed = d.seed;
  cfg->dia_fill_limit = 0;
  cfg->table_input = nullptr;
  cfg->table_output = nullptr;
}

dynsparse_status dynsparse_run_benchmark(const dynsparse_bench_config* cfg,
                                         dynsparse_report** out) {
  if (!cfg || !out) return fail(DYNSPARSE_ERR_NULL_ARGUMENT, "null argument");
  return guarded([&] {
    ds::BenchConfig c;
    c.nx = cfg->nx;
    c.ny = cfg->ny;
    c.nz = cfg->nz;
    c.px = cfg->px;
    c.py = cfg->py;
    c.pz = cfg->pz;
    if (cfg->mode < DYNSPARSE_MODE_FIXED || cfg->mode > DYNSPARSE_MODE_MULTI)
      throw ds::Error(ds::ErrorCode::InvalidArgument, "unknown mode");
    c.mode = static_cast<ds::PlanMode>(cfg->mode);
    c.local_format = to_format(cfg->local_format);
    c.remote_format = to_format(cfg->remote_format);
    c.iters = cfg->iters;
    c.reps = cfg->reps;
    c.tune = cfg->tune != 0;
    c.backend = to_backend(cfg->backend).kind();
    c.threads = cfg->backend.kind == DYNSPARSE_BACKEND_THREADED ? cfg->backend.nthreads : 1;
    c.cg_tol = cfg->cg_tol;
    c.cg_max_iters = cfg->cg_max_iters;
    c.seed = cfg->seed;
    if (cfg->dia_fill_limit > 0) c.dia_fill_limit = cfg->dia_fill_limit;
    if (cfg->table_input && *cfg->table_input) c.table_input = cfg->table_input;
    if (cfg->table_output && *cfg->table_output) c.table_output = cfg->table_output;
    auto h = std::make_unique<dynsparse_report>();
    h->report = ds::run_benchmark(c);
    *out = h.release();
  });
}

void dynsparse_report_destroy(dynsparse_report* r) { delete r; }

int dynsparse_report_exit_code(const dynsparse_report* r) {
  return r ? ds::exit_code(r->report) : 1;
}

dynsparse_status dynsparse_report_write(const dynsparse_report* r,
                                        dynsparse_report_format format, const char* path) {
  if (!r) return fail(DYNSPARSE_ERR_NULL_ARGUMENT, "null report");
  return guarded([&] {
    const auto f = format == DYNSPARSE_REPORT_CSV ? ds::ReportFormat::Csv : ds::ReportFormat::Json;
    ds::emit_report(r->report, f, path ? std::filesystem::path(path) : std::filesystem::path());
  });
}

const char* dynsparse_report_text(const dynsparse_report* r, dynsparse_report_format format) {
  if (!r) return nullptr;
  try {
    if (format == DYNSPARSE_REPORT_CSV) {
      r->csv = ds::report_to_csv(r->report);
      return r->csv.c_str();
    }
    r->json = ds::report_to_json(r->report);
    return r->json.c_str();
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return nullptr;
  }
}

dynsparse_status dynsparse_report_parse(const char* text, dynsparse_report_format format,
                                        dynsparse_report** out) {
  if (!text || !out) return fail(DYNSPARSE_ERR_NULL_ARGUMENT, "null argument");
  return guarded([&] {
    auto h = std::make_unique<dynsparse_report>();
    h->report = format == DYNSPARSE_REPORT_CSV ? ds::report_from_csv(text)
                                               : ds::report_from_json(text);
    *out = h.release();
  });
}

}  // extern "C"
