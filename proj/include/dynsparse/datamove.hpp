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

#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>

#include "dynsparse/containers.hpp"

namespace dynsparse {

// ---------------------------------------------------------------------------
// Copies
// ---------------------------------------------------------------------------

/// dst becomes another handle on src's storage.
template <SparseContainer T>
void shallow_copy(const T& src, T& dst) {
  dst = src;
}

/// The slot's active format is its declared type; a different active format
/// in src is a TypeMismatch.
void shallow_copy(const DynamicMatrix& src, DynamicMatrix& dst);

/// Bitwise copy of every array from src into dst's existing storage. The two
/// containers must agree on dimensions and buffer lengths. Copying between
/// handles that alias the same storage is a no-op.
void deep_copy(const CooMatrix& src, CooMatrix& dst);
void deep_copy(const CsrMatrix& src, CsrMatrix& dst);
void deep_copy(const DiaMatrix& src, DiaMatrix& dst);
void deep_copy(const DynamicMatrix& src, DynamicMatrix& dst);
void deep_copy(const DenseVector& src, DenseVector& dst);

/// Fresh zero-filled allocation with src's format, dimensions and buffer
/// lengths; a valid deep_copy destination.
CooMatrix create_compatible(const CooMatrix& src);
CsrMatrix create_compatible(const CsrMatrix& src);
DiaMatrix create_compatible(const DiaMatrix& src);
DynamicMatrix create_compatible(const DynamicMatrix& src);

template <MatrixLike T>
T clone(const T& src) {
  T dst = create_compatible(src);
  deep_copy(src, dst);
  return dst;
}

template <class T>
struct MirrorPair {
  T device;
  T host;
};

/// Same-space mirrors alias the source so deep copies through the pair cost
/// nothing; otherwise the mirror is a compatible allocation that has to be
/// synchronised with deep_copy.
template <MatrixLike T>
MirrorPair<T> create_mirror(const T& src, MemorySpace space) {
  if (space == src.space()) return {src, src};
  return {src, create_compatible(src)};
}

// ---------------------------------------------------------------------------
// Conversion. Every path goes through canonical COO.
// ---------------------------------------------------------------------------

struct ConvertOptions {
  /// Maximum DIA value slots (ndiags * nrows). Unset means
  /// default_dia_fill_limit() of the canonical matrix.
  std::optional<index_t> dia_fill_limit;
};

index_t default_dia_fill_limit(index_t nnz, index_t nrows) noexcept;

/// Sorted by (row, col) with duplicate coordinates summed. Entries that sum
/// to 0.0 stay as explicit zeros.
CooMatrix canonicalize_coo(const CooMatrix& m);

CooMatrix to_coo(const CooMatrix& m);
CooMatrix to_coo(const CsrMatrix& m);
CooMatrix to_coo(const DiaMatrix& m);
CooMatrix to_coo(const DynamicMatrix& m);

CsrMatrix coo_to_csr(const CooMatrix& canonical);
DiaMatrix coo_to_dia(const CooMatrix& canonical, const ConvertOptions& opts = {});

template <MatrixLike M>
DynamicMatrix convert(const M& src, FormatId target, const ConvertOptions& opts = {}) {
  CooMatrix coo = to_coo(src);
  switch (target) {
    case FormatId::Coo: return DynamicMatrix(std::move(coo));
    case FormatId::Csr: return DynamicMatrix(coo_to_csr(coo));
    case FormatId::Dia: return DynamicMatrix(coo_to_dia(coo, opts));
  }
  throw Error(ErrorCode::UnknownFormat, "conversion target");
}

template <SparseContainer T, MatrixLike M>
T convert_to(const M& src, const ConvertOptions& opts = {}) {
  return std::get<T>(convert(src, T::format, opts).payload());
}

/// Replaces m's payload by its conversion to `target`. No-op when target is
/// already active; m is untouched if conversion throws.
void convert_inplace(DynamicMatrix& m, FormatId target, const ConvertOptions& opts = {});

// ---------------------------------------------------------------------------
// Matrix Market coordinate files
// ---------------------------------------------------------------------------

/// Reads `coordinate` files with real, integer or pattern fields and general
/// or symmetric symmetry. Indices on disk are 1-based.
CooMatrix read_matrix_market(std::istream& in);
CooMatrix read_matrix_market(const std::filesystem::path& path);

/// Writes `%%MatrixMarket matrix coordinate real general` with 1-based
/// indices and round-trip precision values.
void write_matrix_market(std::ostream& out, index_t nrows, index_t ncols,
                         std::span<const Entry> entries);

template <MatrixLike M>
void write_matrix_market(std::ostream& out, const M& m) {
  const auto entries = nonzero_entries(m);
  write_matrix_market(out, m.nrows(), m.ncols(), entries);
}

void write_matrix_market_file(const std::filesystem::path& path, index_t nrows, index_t ncols,
                              std::span<const Entry> entries);

template <MatrixLike M>
void write_matrix_market(const std::filesystem::path& path, const M& m) {
  const auto entries = nonzero_entries(m);
  write_matrix_market_file(path, m.nrows(), m.ncols(), entries);
}

}  // namespace dynsparse
