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

#include <filesystem>
#include <random>
#include <sstream>
#include <vector>

#include "check_error.hpp"
#include "doctest.h"
#include "dynsparse/datamove.hpp"
#include "support.hpp"

using namespace dynsparse;
using testing_support::canonical_map;
using testing_support::map_entries;
using testing_support::sorted_entries;

namespace {

using Idx = std::vector<index_t>;
using Val = std::vector<value_t>;

CsrMatrix identity_csr(index_t n) {
  Idx off, col;
  for (index_t i = 0; i <= n; ++i) off.push_back(i);
  for (index_t i = 0; i < n; ++i) col.push_back(i);
  return build_csr(n, n, off, col, Val(static_cast<std::size_t>(n), 1.0));
}

CooMatrix tridiag_coo(index_t n) {
  Idx r, c;
  Val v;
  for (index_t i = 0; i < n; ++i)
    for (index_t j = std::max<index_t>(0, i - 1); j <= std::min(n - 1, i + 1); ++j) {
      r.push_back(i);
      c.push_back(j);
      v.push_back(i == j ? 2.0 : -1.0);
    }
  return build_coo(n, n, r, c, v);
}

template <class S, class D>
concept ShallowCopyable = requires(const S& s, D& d) { shallow_copy(s, d); };

}  // namespace

static_assert(ShallowCopyable<CsrMatrix, CsrMatrix>);
static_assert(!ShallowCopyable<CsrMatrix, CooMatrix>);
static_assert(!ShallowCopyable<DiaMatrix, CsrMatrix>);

TEST_SUITE("datamove") {

TEST_CASE("shallow_copy aliases and keeps storage alive") {
  auto a = identity_csr(2);
  CsrMatrix alias;
  shallow_copy(a, alias);
  CHECK(alias.shares_storage_with(a));
  alias.values()[1] = 9.0;
  CHECK(a.values()[1] == 9.0);

  DynamicMatrix owner(identity_csr(3));
  DynamicMatrix slot(CsrMatrix{});
  shallow_copy(owner, slot);
  CHECK(owner.get<CsrMatrix>().use_count() == 2);
  owner = DynamicMatrix();  // release the original handle
  CHECK(slot.get<CsrMatrix>().use_count() == 1);
  CHECK(slot.nnz() == 3);
}

TEST_CASE("shallow_copy into a slot of another format") {
  DynamicMatrix src(identity_csr(2));
  DynamicMatrix dst(CooMatrix{});
  CHECK_ERROR(ErrorCode::TypeMismatch, shallow_copy(src, dst));
  CHECK(dst.active() == FormatId::Coo);
}

TEST_CASE("deep_copy into preallocated storage") {
  auto src = identity_csr(2);
  CsrMatrix dst(2, 2, 2);
  deep_copy(src, dst);
  CHECK(!dst.shares_storage_with(src));
  CHECK(nonzero_entries(dst) == nonzero_entries(src));
  src.values()[0] = -4.0;
  CHECK(dst.values()[0] == 1.0);

  DiaMatrix dia(2, 2, 1);
  DynamicMatrix dsrc(src), ddst(dia);
  CHECK_ERROR(ErrorCode::IncompatibleContainers, deep_copy(dsrc, ddst));
  CsrMatrix wrong(3, 3, 2);
  CHECK_ERROR(ErrorCode::IncompatibleContainers, deep_copy(src, wrong));
  CsrMatrix wrong_nnz(2, 2, 1);
  CHECK_ERROR(ErrorCode::IncompatibleContainers, deep_copy(src, wrong_nnz));
}

TEST_CASE("property: deep_copy and clone are bitwise") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    auto g = testing_support::random_coo(rng, 17, 23, 0.3, true);
    auto coo = build_coo(17, 23, g.rows, g.cols, g.vals);
    for (FormatId f : kAllFormats) {
      DynamicMatrix m = convert(coo, f, testing_support::unbounded_fill(17, 23));
      DynamicMatrix c = clone(m);
      CHECK(c.active() == f);
      m.visit([&](const auto& a) {
        using T = std::decay_t<decltype(a)>;
        const T& b = c.template get<T>();
        CHECK(!a.shares_storage_with(b));
        auto va = a.values(), vb = b.values();
        CHECK(std::equal(va.begin(), va.end(), vb.begin(), vb.end()));
      });
      CHECK(nonzero_entries(c) == nonzero_entries(m));
    }
  }
}

TEST_CASE("create_mirror on the host aliases") {
  auto a = identity_csr(3);
  auto mp = create_mirror(a, MemorySpace::Host);
  CHECK(mp.host.shares_storage_with(a));
  CHECK(mp.host.nrows() == a.nrows());
  CHECK(mp.host.ncols() == a.ncols());
  deep_copy(mp.device, mp.host);  // aliasing: no-op
  CHECK(nonzero_entries(mp.host) == nonzero_entries(a));

  DenseVector v{1, 2, 3}, w(3);
  deep_copy(v, w);
  CHECK(w == v);
}

TEST_CASE("convert identity and tridiagonal") {
  auto coo = convert_to<CooMatrix>(identity_csr(2));
  CHECK(nonzero_entries(coo) == std::vector<Entry>{{0, 0, 1}, {1, 1, 1}});

  auto dia = convert_to<DiaMatrix>(tridiag_coo(3));
  CHECK(Idx(dia.offsets().begin(), dia.offsets().end()) == Idx{-1, 0, 1});
  // Two padded slots: (row 0, diagonal -1) and (row 2, diagonal +1).
  index_t padded = 0;
  for (index_t j = 0; j < dia.ndiags(); ++j) {
    auto [first, last] = dia.row_range(dia.offsets()[static_cast<std::size_t>(j)]);
    padded += dia.nrows() - (last - first);
  }
  CHECK(padded == 2);
  const auto d = testing_support::densify(dia);
  for (index_t i = 0; i < 3; ++i)
    for (index_t j = 0; j < 3; ++j)
      CHECK(d.at(i, j) == (i == j ? 2.0 : (std::abs(i - j) == 1 ? -1.0 : 0.0)));
}

TEST_CASE("DIA fill limit") {
  // One entry on each of 64 distinct diagonals: 64 x 64 slots for 64 entries.
  std::mt19937_64 rng(99);
  Idx r, c;
  Val v;
  for (index_t d = 0; d < 64; ++d) {
    std::uniform_int_distribution<index_t> row(0, 63 - d);
    const index_t i = row(rng);
    r.push_back(i);
    c.push_back(i + d);
    v.push_back(1.0);
  }
  auto coo = build_coo(64, 64, r, c, v);
  CHECK(testing_support::count_diagonals(nonzero_entries(coo)) == 64);
  ConvertOptions tight;
  tight.dia_fill_limit = 16 * 64;
  CHECK_ERROR(ErrorCode::DiaFillOverflow, convert(coo, FormatId::Dia, tight));
  ConvertOptions exact;
  exact.dia_fill_limit = 64 * 64;
  CHECK(convert_to<DiaMatrix>(coo, exact).ndiags() == 64);
  CHECK(default_dia_fill_limit(64, 64) == 640);
}

TEST_CASE("property: fill overflow iff ndiags * nrows > limit") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 60; ++trial) {
    std::uniform_int_distribution<index_t> dim(1, 40);
    const index_t nr = dim(rng), nc = dim(rng);
    auto g = testing_support::random_coo(rng, nr, nc, 0.1, false);
    auto coo = build_coo(nr, nc, g.rows, g.cols, g.vals);
    const index_t slots = testing_support::count_diagonals(g.entries()) * nr;
    std::uniform_int_distribution<index_t> lim(std::max<index_t>(1, slots - 20), slots + 20);
    ConvertOptions o;
    o.dia_fill_limit = lim(rng);
    if (slots > *o.dia_fill_limit) {
      CHECK_ERROR(ErrorCode::DiaFillOverflow, convert(coo, FormatId::Dia, o));
    } else {
      CHECK(convert_to<DiaMatrix>(coo, o).ndiags() * nr == slots);
    }
  }
}

TEST_CASE("convert_inplace") {
  DynamicMatrix m(identity_csr(4));
  convert_inplace(m, FormatId::Dia);
  CHECK(m.active() == FormatId::Dia);
  CHECK(Idx(m.get<DiaMatrix>().offsets().begin(), m.get<DiaMatrix>().offsets().end()) == Idx{0});

  DynamicMatrix n(identity_csr(4));
  const CsrMatrix before = n.get<CsrMatrix>();
  convert_inplace(n, FormatId::Csr);
  CHECK(n.get<CsrMatrix>().shares_storage_with(before));

  // Failure leaves the matrix untouched.
  DynamicMatrix f(identity_csr(4));
  const auto entries = nonzero_entries(f);
  ConvertOptions o;
  o.dia_fill_limit = 1;
  CHECK_ERROR(ErrorCode::DiaFillOverflow, convert_inplace(f, FormatId::Dia, o));
  CHECK(f.active() == FormatId::Csr);
  CHECK(nonzero_entries(f) == entries);
}

TEST_CASE("canonicalize_coo") {
  auto a = canonicalize_coo(build_coo(2, 1, Idx{1, 0}, Idx{0, 0}, Val{5, 6}));
  CHECK(Idx(a.row_indices().begin(), a.row_indices().end()) == Idx{0, 1});
  CHECK(nonzero_entries(a) == std::vector<Entry>{{0, 0, 6}, {1, 0, 5}});

  auto b = canonicalize_coo(build_coo(1, 1, Idx{0, 0}, Idx{0, 0}, Val{1, 2}));
  CHECK(nonzero_entries(b) == std::vector<Entry>{{0, 0, 3}});

  auto z = canonicalize_coo(build_coo(1, 1, Idx{0, 0}, Idx{0, 0}, Val{1, -1}));
  CHECK(nonzero_entries(z) == std::vector<Entry>{{0, 0, 0}});
  CHECK(z.nnz() == 1);
  // The explicit zero survives CSR but not DIA.
  CHECK(convert_to<CsrMatrix>(z).nnz() == 1);
  CHECK(convert_to<DiaMatrix>(z).nnz() == 0);
}

TEST_CASE("property: conversion closure") {
  std::mt19937_64 rng(1234);
  for (int trial = 0; trial < 60; ++trial) {
    std::uniform_int_distribution<index_t> dim(1, 48);
    std::uniform_real_distribution<double> dens(0.01, 0.5);
    const index_t nr = dim(rng), nc = dim(rng);
    auto g = testing_support::random_coo(rng, nr, nc, dens(rng), true);
    auto coo = build_coo(nr, nc, g.rows, g.cols, g.vals);
    const auto want = map_entries(canonical_map(g.entries()));
    for (FormatId f : kAllFormats)
      for (FormatId h : kAllFormats) {
        const auto opts = testing_support::unbounded_fill(nr, nc);
        DynamicMatrix mid = convert(coo, h, opts);
        DynamicMatrix back = convert(mid, f, opts);
        CHECK(back.active() == f);
        CHECK(back.nrows() == nr);
        CHECK(back.ncols() == nc);
        CHECK(sorted_entries(back) == want);
      }
  }
}

TEST_CASE("Matrix Market round-trip and parsing") {
  auto a = identity_csr(2);
  std::stringstream ss;
  write_matrix_market(ss, a);
  auto back = read_matrix_market(ss);
  CHECK(sorted_entries(back) == sorted_entries(a));

  std::istringstream one("%%MatrixMarket matrix coordinate real general\n1 1 1\n1 1 1.0\n");
  CHECK(nonzero_entries(read_matrix_market(one)) == std::vector<Entry>{{0, 0, 1.0}});

  std::istringstream arr("%%MatrixMarket matrix array real general\n1 1\n1.0\n");
  CHECK_ERROR(ErrorCode::ParseError, read_matrix_market(arr));

  std::istringstream sym(
      "%%MatrixMarket matrix coordinate real symmetric\n% comment\n\n3 3 2\n1 1 4\n3 1 -2\n");
  CHECK(sorted_entries(read_matrix_market(sym)) ==
        std::vector<Entry>{{0, 0, 4}, {0, 2, -2}, {2, 0, -2}});

  std::istringstream pat("%%MatrixMarket matrix coordinate pattern general\n2 2 1\n2 1\n");
  CHECK(nonzero_entries(read_matrix_market(pat)) == std::vector<Entry>{{1, 0, 1.0}});

  std::istringstream bad("%%MatrixMarket matrix coordinate real general\n2 2 1\n3 1 1\n");
  try {
    read_matrix_market(bad);
    FAIL("expected ParseError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ParseError);
    CHECK(e.detail() == index_t{3});
  }

  CHECK_ERROR(ErrorCode::IoError, read_matrix_market(std::filesystem::path("/nonexistent/x.mtx")));
}

TEST_CASE("property: Matrix Market round-trip is exact") {
  std::mt19937_64 rng(8);
  const auto dir = std::filesystem::temp_directory_path();
  for (int trial = 0; trial < 10; ++trial) {
    auto g = testing_support::random_coo(rng, 13, 9, 0.3, false);
    auto coo = build_coo(13, 9, g.rows, g.cols, g.vals);
    const auto path = dir / ("dynsparse_mm_" + std::to_string(trial) + ".mtx");
    write_matrix_market(path, convert(coo, FormatId::Dia, testing_support::unbounded_fill(13, 9)));
    auto back = read_matrix_market(path);
    std::filesystem::remove(path);
    CHECK(back.nrows() == 13);
    CHECK(back.ncols() == 9);
    CHECK(sorted_entries(back) == sorted_entries(convert_to<CsrMatrix>(coo)));
  }
}

}  // TEST_SUITE
