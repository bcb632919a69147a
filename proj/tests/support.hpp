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

// Independent oracles and random generators shared by the test binaries.
// Nothing here calls into the conversion or kernel code under test.

#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <tuple>
#include <utility>
#include <vector>

#include "dynsparse/containers.hpp"
#include "dynsparse/datamove.hpp"

namespace testing_support {

using dynsparse::Entry;
using dynsparse::index_t;
using dynsparse::value_t;

using EntryMap = std::map<std::pair<index_t, index_t>, value_t>;

/// Sums duplicates in storage order, like a sequential accumulation would.
inline EntryMap canonical_map(const std::vector<Entry>& entries) {
  EntryMap m;
  for (const auto& e : entries) {
    auto [it, fresh] = m.try_emplace({e.row, e.col}, e.value);
    if (!fresh) it->second += e.value;
  }
  return m;
}

inline std::vector<Entry> map_entries(const EntryMap& m) {
  std::vector<Entry> out;
  for (const auto& [k, v] : m) out.push_back({k.first, k.second, v});
  return out;
}

template <class M>
std::vector<Entry> sorted_entries(const M& m) {
  auto e = dynsparse::nonzero_entries(m);
  std::sort(e.begin(), e.end(), [](const Entry& a, const Entry& b) {
    return std::tie(a.row, a.col) < std::tie(b.row, b.col);
  });
  return e;
}

struct Dense {
  index_t nrows = 0, ncols = 0;
  std::vector<value_t> a;  // row-major
  value_t& at(index_t i, index_t j) { return a[static_cast<std::size_t>(i * ncols + j)]; }
  value_t at(index_t i, index_t j) const { return a[static_cast<std::size_t>(i * ncols + j)]; }
};

inline Dense densify(index_t nrows, index_t ncols, const std::vector<Entry>& entries) {
  Dense d{nrows, ncols, std::vector<value_t>(static_cast<std::size_t>(nrows * ncols), 0.0)};
  for (const auto& e : entries) d.at(e.row, e.col) += e.value;
  return d;
}

template <class M>
Dense densify(const M& m) {
  return densify(m.nrows(), m.ncols(), dynsparse::nonzero_entries(m));
}

/// Plain row-by-row product in long double.
inline std::vector<value_t> dense_matvec(const Dense& d, const std::vector<value_t>& x) {
  std::vector<value_t> y(static_cast<std::size_t>(d.nrows));
  for (index_t i = 0; i < d.nrows; ++i) {
    long double s = 0.0L;
    for (index_t j = 0; j < d.ncols; ++j) s += static_cast<long double>(d.at(i, j)) * x[j];
    y[static_cast<std::size_t>(i)] = static_cast<value_t>(s);
  }
  return y;
}

template <class A, class B>
double rel_err(const A& got, const B& want) {
  long double num = 0.0L, den = 0.0L;
  for (std::size_t i = 0; i < want.size(); ++i) {
    const long double d = static_cast<long double>(got[i]) - want[i];
    num += d * d;
    den += static_cast<long double>(want[i]) * want[i];
  }
  if (den == 0.0L) return static_cast<double>(std::sqrt(num));
  return static_cast<double>(std::sqrt(num / den));
}

template <class A, class B>
double max_abs_diff(const A& a, const B& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) m = std::max(m, std::abs(double(a[i]) - double(b[i])));
  return m;
}

/// Admits every diagonal an nrows x ncols matrix can have.
inline dynsparse::ConvertOptions unbounded_fill(index_t nrows, index_t ncols) {
  dynsparse::ConvertOptions o;
  o.dia_fill_limit = nrows * (nrows + ncols);
  return o;
}

/// Nonzero value in [-1, -0.05] U [0.05, 1].
inline value_t random_value(std::mt19937_64& rng) {
  std::uniform_real_distribution<value_t> mag(0.05, 1.0);
  std::bernoulli_distribution neg(0.5);
  const value_t v = mag(rng);
  return neg(rng) ? -v : v;
}

inline std::vector<value_t> random_vector(std::mt19937_64& rng, index_t n) {
  std::uniform_real_distribution<value_t> u(-1.0, 1.0);
  std::vector<value_t> x(static_cast<std::size_t>(n));
  for (auto& v : x) v = u(rng);
  return x;
}

struct RandomCoo {
  index_t nrows = 0, ncols = 0;
  std::vector<index_t> rows, cols;
  std::vector<value_t> vals;
  std::vector<Entry> entries() const {
    std::vector<Entry> e;
    for (std::size_t k = 0; k < vals.size(); ++k) e.push_back({rows[k], cols[k], vals[k]});
    return e;
  }
};

/// Unsorted triples at roughly the requested density. With `duplicates`, a
/// few coordinates are repeated so canonicalization has something to sum.
inline RandomCoo random_coo(std::mt19937_64& rng, index_t nrows, index_t ncols, double density,
                            bool duplicates) {
  RandomCoo m{nrows, ncols, {}, {}, {}};
  std::bernoulli_distribution keep(density);
  for (index_t i = 0; i < nrows; ++i)
    for (index_t j = 0; j < ncols; ++j)
      if (keep(rng)) {
        m.rows.push_back(i);
        m.cols.push_back(j);
        m.vals.push_back(random_value(rng));
      }
  if (duplicates && !m.vals.empty()) {
    std::uniform_int_distribution<std::size_t> pick(0, m.vals.size() - 1);
    const std::size_t extra = 1 + m.vals.size() / 10;
    for (std::size_t k = 0; k < extra; ++k) {
      const std::size_t s = pick(rng);
      m.rows.push_back(m.rows[s]);
      m.cols.push_back(m.cols[s]);
      m.vals.push_back(random_value(rng));
    }
  }
  std::vector<std::size_t> perm(m.vals.size());
  for (std::size_t k = 0; k < perm.size(); ++k) perm[k] = k;
  std::shuffle(perm.begin(), perm.end(), rng);
  RandomCoo out{nrows, ncols, {}, {}, {}};
  for (std::size_t k : perm) {
    out.rows.push_back(m.rows[k]);
    out.cols.push_back(m.cols[k]);
    out.vals.push_back(m.vals[k]);
  }
  return out;
}

/// Number of distinct col - row values, i.e. DIA diagonals needed.
inline index_t count_diagonals(const std::vector<Entry>& entries) {
  std::set<index_t> d;
  for (const auto& e : entries) d.insert(e.col - e.row);
  return static_cast<index_t>(d.size());
}

// ---------------------------------------------------------------------------
// 27-point stencil oracle on an N0 x N1 x N2 grid, by direct neighbour
// enumeration. Point id g = x + N0 * (y + N1 * z).
// ---------------------------------------------------------------------------

struct StencilOracle {
  index_t n0, n1, n2;

  index_t size() const { return n0 * n1 * n2; }

  template <class F>
  void for_each_neighbor(index_t g, F&& f) const {
    const index_t x = g % n0, y = (g / n0) % n1, z = g / (n0 * n1);
    for (index_t dz = -1; dz <= 1; ++dz)
      for (index_t dy = -1; dy <= 1; ++dy)
        for (index_t dx = -1; dx <= 1; ++dx) {
          const index_t a = x + dx, b = y + dy, c = z + dz;
          if (a < 0 || b < 0 || c < 0 || a >= n0 || b >= n1 || c >= n2) continue;
          f(a + n0 * (b + n1 * c));
        }
  }

  index_t row_nnz(index_t g) const {
    index_t k = 0;
    for_each_neighbor(g, [&](index_t) { ++k; });
    return k;
  }

  index_t total_nnz() const {
    index_t k = 0;
    for (index_t g = 0; g < size(); ++g) k += row_nnz(g);
    return k;
  }

  value_t coefficient(index_t row, index_t col) const { return row == col ? 26.0 : -1.0; }

  std::vector<value_t> apply(const std::vector<value_t>& x) const {
    std::vector<value_t> y(static_cast<std::size_t>(size()));
    for (index_t g = 0; g < size(); ++g) {
      long double s = 0.0L;
      for_each_neighbor(g, [&](index_t h) { s += coefficient(g, h) * static_cast<long double>(x[h]); });
      y[static_cast<std::size_t>(g)] = static_cast<value_t>(s);
    }
    return y;
  }
};

}  // namespace testing_support
