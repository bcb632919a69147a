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

#include "dynsparse/kernels.hpp"

#include <algorithm>
#include <string>
#include <vector>

#include "parallel.hpp"

namespace dynsparse {

using detail::parallel_for;

namespace {

std::size_t sz(index_t n) { return static_cast<std::size_t>(n); }

template <class M>
void check_spmv_dims(const M& a, std::span<const value_t> x, std::span<value_t> y) {
  if (static_cast<index_t>(x.size()) != a.ncols() || static_cast<index_t>(y.size()) != a.nrows())
    throw Error(ErrorCode::DimensionMismatch,
                "spmv on " + std::to_string(a.nrows()) + "x" + std::to_string(a.ncols()) +
                    " matrix with x of length " + std::to_string(x.size()) +
                    " and y of length " + std::to_string(y.size()));
}

void check_same_length(std::size_t a, std::size_t b) {
  if (a != b)
    throw Error(ErrorCode::DimensionMismatch,
                "vector lengths " + std::to_string(a) + " and " + std::to_string(b));
}

// -- CSR ----------------------------------------------------------------------

template <bool Accumulate>
void csr_kernel(const ExecBackend& backend, const CsrMatrix& a, std::span<const value_t> x,
                std::span<value_t> y) {
  check_spmv_dims(a, x, y);
  const index_t* off = a.row_offsets().data();
  const index_t* col = a.col_indices().data();
  const value_t* val = a.values().data();
  const value_t* xp = x.data();
  value_t* yp = y.data();
  parallel_for(backend, a.nrows(), [=](index_t begin, index_t end, int) {
    for (index_t i = begin; i < end; ++i) {
      value_t sum = 0.0;
      for (index_t k = off[i]; k < off[i + 1]; ++k) sum += val[k] * xp[col[k]];
      if constexpr (Accumulate)
        yp[i] += sum;
      else
        yp[i] = sum;
    }
  });
}

// -- DIA ----------------------------------------------------------------------

template <bool Accumulate>
void dia_kernel(const ExecBackend& backend, const DiaMatrix& a, std::span<const value_t> x,
                std::span<value_t> y) {
  check_spmv_dims(a, x, y);
  const index_t nrows = a.nrows();
  const index_t ndiags = a.ndiags();
  const index_t* off = a.offsets().data();
  const value_t* val = a.values().data();
  const value_t* xp = x.data();
  value_t* yp = y.data();
  parallel_for(backend, nrows, [&](index_t begin, index_t end, int) {
    if constexpr (!Accumulate) std::fill(yp + begin, yp + end, 0.0);
    for (index_t j = 0; j < ndiags; ++j) {
      const auto [first, last] = a.row_range(off[j]);
      const index_t lo = std::max(first, begin);
      const index_t hi = std::min(last, end);
      const value_t* diag = val + j * nrows;
      const index_t d = off[j];
      for (index_t i = lo; i < hi; ++i) yp[i] += diag[i] * xp[i + d];
    }
  });
}

// -- COO ----------------------------------------------------------------------

template <bool Accumulate>
void coo_kernel(const ExecBackend& backend, const CooMatrix& a, std::span<const value_t> x,
                std::span<value_t> y) {
  check_spmv_dims(a, x, y);
  const index_t* row = a.row_indices().data();
  const index_t* col = a.col_indices().data();
  const value_t* val = a.values().data();
  const index_t nnz = a.nnz();
  const int nchunks = detail::chunk_count(backend, nnz);

  if (nchunks == 1) {
    if constexpr (!Accumulate) std::fill(y.begin(), y.end(), 0.0);
    for (index_t k = 0; k < nnz; ++k) y[sz(row[k])] += val[k] * x[sz(col[k])];
    return;
  }

  // Per-chunk private rows, merged in chunk order.
  const index_t nrows = a.nrows();
  std::vector<value_t> partial(sz(nrows) * sz(nchunks), 0.0);
  detail::run_chunks(nchunks, [&](int c) {
    value_t* mine = partial.data() + sz(nrows) * sz(c);
    const index_t begin = detail::chunk_begin(nnz, nchunks, c);
    const index_t end = detail::chunk_begin(nnz, nchunks, c + 1);
    for (index_t k = begin; k < end; ++k) mine[row[k]] += val[k] * x[sz(col[k])];
  });
  parallel_for(backend, nrows, [&](index_t begin, index_t end, int) {
    for (index_t i = begin; i < end; ++i) {
      value_t sum = 0.0;
      for (int c = 0; c < nchunks; ++c) sum += partial[sz(nrows) * sz(c) + sz(i)];
      if constexpr (Accumulate)
        y[sz(i)] += sum;
      else
        y[sz(i)] = sum;
    }
  });
}

}  // namespace

void spmv(const ExecBackend& b, const CooMatrix& a, std::span<const value_t> x, std::span<value_t> y) {
  coo_kernel<false>(b, a, x, y);
}
void spmv(const ExecBackend& b, const CsrMatrix& a, std::span<const value_t> x, std::span<value_t> y) {
  csr_kernel<false>(b, a, x, y);
}
void spmv(const ExecBackend& b, const DiaMatrix& a, std::span<const value_t> x, std::span<value_t> y) {
  dia_kernel<false>(b, a, x, y);
}
void spmv(const ExecBackend& b, const DynamicMatrix& a, std::span<const value_t> x,
          std::span<value_t> y) {
  a.visit([&](const auto& m) { spmv(b, m, x, y); });
}

void spmv_add(const ExecBackend& b, const CooMatrix& a, std::span<const value_t> x,
              std::span<value_t> y) {
  coo_kernel<true>(b, a, x, y);
}
void spmv_add(const ExecBackend& b, const CsrMatrix& a, std::span<const value_t> x,
              std::span<value_t> y) {
  csr_kernel<true>(b, a, x, y);
}
void spmv_add(const ExecBackend& b, const DiaMatrix& a, std::span<const value_t> x,
              std::span<value_t> y) {
  dia_kernel<true>(b, a, x, y);
}
void spmv_add(const ExecBackend& b, const DynamicMatrix& a, std::span<const value_t> x,
              std::span<value_t> y) {
  a.visit([&](const auto& m) { spmv_add(b, m, x, y); });
}

// -- Dense vector kernels -------------------------------------------------------

namespace {

// Chunk partial sums combined left to right. Shared by reduce, dot and scan
// so scan's last element reproduces reduce exactly.
template <class Term>
value_t chunked_sum(const ExecBackend& backend, index_t n, Term term) {
  const int nchunks = detail::chunk_count(backend, n);
  std::vector<value_t> partial(sz(nchunks), 0.0);
  parallel_for(backend, n, [&](index_t begin, index_t end, int c) {
    value_t s = 0.0;
    for (index_t i = begin; i < end; ++i) s += term(i);
    partial[sz(c)] = s;
  });
  value_t total = 0.0;
  for (value_t p : partial) total += p;
  return total;
}

}  // namespace

value_t dot(const ExecBackend& backend, std::span<const value_t> x, std::span<const value_t> y) {
  check_same_length(x.size(), y.size());
  return chunked_sum(backend, static_cast<index_t>(x.size()),
                     [&](index_t i) { return x[sz(i)] * y[sz(i)]; });
}

void waxpby(const ExecBackend& backend, value_t alpha, std::span<const value_t> x, value_t beta,
            std::span<const value_t> y, std::span<value_t> w) {
  check_same_length(x.size(), y.size());
  check_same_length(x.size(), w.size());
  const value_t* xp = x.data();
  const value_t* yp = y.data();
  value_t* wp = w.data();
  parallel_for(backend, static_cast<index_t>(w.size()), [=](index_t begin, index_t end, int) {
    for (index_t i = begin; i < end; ++i) wp[i] = alpha * xp[i] + beta * yp[i];
  });
}

value_t reduce(const ExecBackend& backend, std::span<const value_t> x) {
  return chunked_sum(backend, static_cast<index_t>(x.size()), [&](index_t i) { return x[sz(i)]; });
}

DenseVector scan(const ExecBackend& backend, std::span<const value_t> x) {
  const auto n = static_cast<index_t>(x.size());
  DenseVector out(n);
  const int nchunks = detail::chunk_count(backend, n);
  std::vector<value_t> totals(sz(nchunks), 0.0);
  parallel_for(backend, n, [&](index_t begin, index_t end, int c) {
    value_t s = 0.0;
    for (index_t i = begin; i < end; ++i) {
      s += x[sz(i)];
      out[i] = s;
    }
    totals[sz(c)] = s;
  });
  if (nchunks == 1) return out;
  std::vector<value_t> carry(sz(nchunks), 0.0);
  value_t running = 0.0;
  for (int c = 0; c < nchunks; ++c) {
    carry[sz(c)] = running;
    running += totals[sz(c)];
  }
  parallel_for(backend, n, [&](index_t begin, index_t end, int c) {
    if (c == 0) return;
    for (index_t i = begin; i < end; ++i) out[i] = carry[sz(c)] + out[i];
  });
  return out;
}

// -- Diagonal ------------------------------------------------------------------

namespace {

index_t diag_len(index_t nrows, index_t ncols) { return std::min(nrows, ncols); }

void check_diag_len(index_t expected, std::span<const value_t> d) {
  if (static_cast<index_t>(d.size()) != expected)
    throw Error(ErrorCode::DimensionMismatch,
                "diagonal of length " + std::to_string(expected) + " given " +
                    std::to_string(d.size()) + " values");
}

[[noreturn]] void absent(index_t i) {
  throw Error(ErrorCode::StructurallyAbsentDiagonal,
              "no stored entry at (" + std::to_string(i) + ", " + std::to_string(i) + ")", i);
}

// Position of (i, i) in row i, or -1.
index_t csr_find_diagonal(const CsrMatrix& a, index_t i) {
  auto off = a.row_offsets();
  auto col = a.col_indices();
  const auto first = col.begin() + off[i];
  const auto last = col.begin() + off[i + 1];
  const auto it = std::lower_bound(first, last, i);
  if (it == last || *it != i) return -1;
  return static_cast<index_t>(it - col.begin());
}

// Column of the main diagonal in a DIA matrix, or -1.
index_t dia_main(const DiaMatrix& a) {
  auto off = a.offsets();
  const auto it = std::lower_bound(off.begin(), off.end(), index_t{0});
  if (it == off.end() || *it != 0) return -1;
  return static_cast<index_t>(it - off.begin());
}

}  // namespace

DenseVector extract_diagonal(const CooMatrix& a) {
  DenseVector d(diag_len(a.nrows(), a.ncols()));
  auto r = a.row_indices();
  auto c = a.col_indices();
  auto v = a.values();
  for (std::size_t k = 0; k < v.size(); ++k)
    if (r[k] == c[k]) d[r[k]] += v[k];
  return d;
}

DenseVector extract_diagonal(const CsrMatrix& a) {
  DenseVector d(diag_len(a.nrows(), a.ncols()));
  auto v = a.values();
  for (index_t i = 0; i < d.size(); ++i) {
    const index_t k = csr_find_diagonal(a, i);
    if (k >= 0) d[i] = v[sz(k)];
  }
  return d;
}

DenseVector extract_diagonal(const DiaMatrix& a) {
  DenseVector d(diag_len(a.nrows(), a.ncols()));
  const index_t j = dia_main(a);
  if (j < 0) return d;
  for (index_t i = 0; i < d.size(); ++i) d[i] = a.value(i, j);
  return d;
}

DenseVector extract_diagonal(const DynamicMatrix& a) {
  return a.visit([](const auto& m) { return extract_diagonal(m); });
}

void update_diagonal(CooMatrix& a, std::span<const value_t> d) {
  const index_t n = diag_len(a.nrows(), a.ncols());
  check_diag_len(n, d);
  auto r = a.row_indices();
  auto c = a.col_indices();
  auto v = a.values();
  std::vector<index_t> first(sz(n), -1);
  for (std::size_t k = 0; k < v.size(); ++k)
    if (r[k] == c[k] && first[sz(r[k])] < 0) first[sz(r[k])] = static_cast<index_t>(k);
  for (index_t i = 0; i < n; ++i)
    if (first[sz(i)] < 0) absent(i);
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (r[k] != c[k]) continue;
    v[k] = first[sz(r[k])] == static_cast<index_t>(k) ? d[sz(r[k])] : 0.0;
  }
}

void update_diagonal(CsrMatrix& a, std::span<const value_t> d) {
  const index_t n = diag_len(a.nrows(), a.ncols());
  check_diag_len(n, d);
  std::vector<index_t> pos(sz(n));
  for (index_t i = 0; i < n; ++i) {
    pos[sz(i)] = csr_find_diagonal(a, i);
    if (pos[sz(i)] < 0) absent(i);
  }
  auto v = a.values();
  for (index_t i = 0; i < n; ++i) v[sz(pos[sz(i)])] = d[sz(i)];
}

void update_diagonal(DiaMatrix& a, std::span<const value_t> d) {
  const index_t n = diag_len(a.nrows(), a.ncols());
  check_diag_len(n, d);
  if (n == 0) return;
  const index_t j = dia_main(a);
  if (j < 0) absent(0);
  for (index_t i = 0; i < n; ++i) a.value(i, j) = d[sz(i)];
}

void update_diagonal(DynamicMatrix& a, std::span<const value_t> d) {
  a.visit([&](auto& m) { update_diagonal(m, d); });
}

}  // namespace dynsparse
