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

#include <concepts>
#include <initializer_list>
#include <memory>
#include <span>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "dynsparse/types.hpp"

namespace dynsparse {

// ---------------------------------------------------------------------------
// Dense containers. These have value semantics.
// ---------------------------------------------------------------------------

class DenseVector {
 public:
  DenseVector() = default;
  explicit DenseVector(index_t n, value_t fill = 0.0) : data_(static_cast<std::size_t>(n), fill) {}
  DenseVector(std::initializer_list<value_t> init) : data_(init) {}
  explicit DenseVector(std::vector<value_t> v) : data_(std::move(v)) {}

  index_t size() const noexcept { return static_cast<index_t>(data_.size()); }
  bool empty() const noexcept { return data_.empty(); }
  MemorySpace space() const noexcept { return MemorySpace::Host; }

  value_t* data() noexcept { return data_.data(); }
  const value_t* data() const noexcept { return data_.data(); }
  value_t& operator[](index_t i) { return data_[static_cast<std::size_t>(i)]; }
  value_t operator[](index_t i) const { return data_[static_cast<std::size_t>(i)]; }

  auto begin() noexcept { return data_.begin(); }
  auto end() noexcept { return data_.end(); }
  auto begin() const noexcept { return data_.begin(); }
  auto end() const noexcept { return data_.end(); }

  std::span<value_t> span() noexcept { return data_; }
  std::span<const value_t> span() const noexcept { return data_; }
  operator std::span<value_t>() noexcept { return data_; }
  operator std::span<const value_t>() const noexcept { return data_; }

  void assign(index_t n, value_t v) { data_.assign(static_cast<std::size_t>(n), v); }
  const std::vector<value_t>& vector() const noexcept { return data_; }

  friend bool operator==(const DenseVector&, const DenseVector&) = default;

 private:
  std::vector<value_t> data_;
};

/// Row-major dense matrix; coefficient (i, j) lives at i * ncols + j.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(index_t nrows, index_t ncols, value_t fill = 0.0)
      : nrows_(nrows), ncols_(ncols), data_(static_cast<std::size_t>(nrows * ncols), fill) {}
  DenseMatrix(std::initializer_list<std::initializer_list<value_t>> rows);

  index_t nrows() const noexcept { return nrows_; }
  index_t ncols() const noexcept { return ncols_; }
  MemorySpace space() const noexcept { return MemorySpace::Host; }

  value_t& operator()(index_t i, index_t j) {
    return data_[static_cast<std::size_t>(i * ncols_ + j)];
  }
  value_t operator()(index_t i, index_t j) const {
    return data_[static_cast<std::size_t>(i * ncols_ + j)];
  }
  std::span<const value_t> data() const noexcept { return data_; }
  std::span<value_t> data() noexcept { return data_; }

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  index_t nrows_ = 0;
  index_t ncols_ = 0;
  std::vector<value_t> data_;
};

// ---------------------------------------------------------------------------
// Sparse containers.
//
// Sparse containers are handles onto reference-counted storage: copying a
// container produces a shallow copy that aliases the same arrays, and the
// storage is released with the last handle. Use deep_copy() or clone() from
// datamove.hpp for an independent copy. Dimensions are fixed at construction.
// ---------------------------------------------------------------------------

struct Entry {
  index_t row;
  index_t col;
  value_t value;
  friend bool operator==(const Entry&, const Entry&) = default;
};

class CooMatrix {
 public:
  static constexpr FormatId format = FormatId::Coo;

  CooMatrix();
  /// Zero-filled allocation of `nnz` triples, usable as a deep_copy target.
  CooMatrix(index_t nrows, index_t ncols, index_t nnz);
  /// Adopts the arrays as-is; build_coo() is the validating path.
  CooMatrix(index_t nrows, index_t ncols, std::vector<index_t> rows, std::vector<index_t> cols,
            std::vector<value_t> values);

  index_t nrows() const noexcept { return s_->nrows; }
  index_t ncols() const noexcept { return s_->ncols; }
  index_t nnz() const noexcept { return static_cast<index_t>(s_->values.size()); }
  MemorySpace space() const noexcept { return MemorySpace::Host; }

  std::span<index_t> row_indices() noexcept { return s_->rows; }
  std::span<const index_t> row_indices() const noexcept { return s_->rows; }
  std::span<index_t> col_indices() noexcept { return s_->cols; }
  std::span<const index_t> col_indices() const noexcept { return s_->cols; }
  std::span<value_t> values() noexcept { return s_->values; }
  std::span<const value_t> values() const noexcept { return s_->values; }

  long use_count() const noexcept { return s_.use_count(); }
  bool shares_storage_with(const CooMatrix& other) const noexcept { return s_ == other.s_; }

 private:
  struct Storage {
    index_t nrows = 0;
    index_t ncols = 0;
    std::vector<index_t> rows;
    std::vector<index_t> cols;
    std::vector<value_t> values;
  };
  std::shared_ptr<Storage> s_;
};

class CsrMatrix {
 public:
  static constexpr FormatId format = FormatId::Csr;

  CsrMatrix();
  CsrMatrix(index_t nrows, index_t ncols, index_t nnz);
  CsrMatrix(index_t nrows, index_t ncols, std::vector<index_t> row_offsets,
            std::vector<index_t> cols, std::vector<value_t> values);

  index_t nrows() const noexcept { return s_->nrows; }
  index_t ncols() const noexcept { return s_->ncols; }
  index_t nnz() const noexcept { return static_cast<index_t>(s_->values.size()); }
  MemorySpace space() const noexcept { return MemorySpace::Host; }

  std::span<index_t> row_offsets() noexcept { return s_->offsets; }
  std::span<const index_t> row_offsets() const noexcept { return s_->offsets; }
  std::span<index_t> col_indices() noexcept { return s_->cols; }
  std::span<const index_t> col_indices() const noexcept { return s_->cols; }
  std::span<value_t> values() noexcept { return s_->values; }
  std::span<const value_t> values() const noexcept { return s_->values; }

  long use_count() const noexcept { return s_.use_count(); }
  bool shares_storage_with(const CsrMatrix& other) const noexcept { return s_ == other.s_; }

 private:
  struct Storage {
    index_t nrows = 0;
    index_t ncols = 0;
    std::vector<index_t> offsets;
    std::vector<index_t> cols;
    std::vector<value_t> values;
  };
  std::shared_ptr<Storage> s_;
};

/// Diagonal storage. Logically an nrows x ndiags array where column j holds
/// diagonal offsets[j] (row i maps to column i + offsets[j]); physically each
/// diagonal is contiguous, so value(i, j) sits at j * nrows + i. Slots whose
/// column falls outside [0, ncols) are padding and hold 0.0.
class DiaMatrix {
 public:
  static constexpr FormatId format = FormatId::Dia;

  DiaMatrix();
  DiaMatrix(index_t nrows, index_t ncols, index_t ndiags);
  DiaMatrix(index_t nrows, index_t ncols, std::vector<index_t> offsets,
            std::vector<value_t> diagonal_major_values);

  index_t nrows() const noexcept { return s_->nrows; }
  index_t ncols() const noexcept { return s_->ncols; }
  index_t ndiags() const noexcept { return static_cast<index_t>(s_->offsets.size()); }
  /// Number of stored values that are not 0.0; padding never counts.
  index_t nnz() const noexcept;
  MemorySpace space() const noexcept { return MemorySpace::Host; }

  std::span<index_t> offsets() noexcept { return s_->offsets; }
  std::span<const index_t> offsets() const noexcept { return s_->offsets; }
  std::span<value_t> values() noexcept { return s_->values; }
  std::span<const value_t> values() const noexcept { return s_->values; }

  std::span<value_t> diagonal(index_t j) noexcept {
    return std::span<value_t>(s_->values).subspan(static_cast<std::size_t>(j * s_->nrows),
                                                  static_cast<std::size_t>(s_->nrows));
  }
  std::span<const value_t> diagonal(index_t j) const noexcept {
    return std::span<const value_t>(s_->values)
        .subspan(static_cast<std::size_t>(j * s_->nrows), static_cast<std::size_t>(s_->nrows));
  }
  value_t value(index_t i, index_t j) const noexcept {
    return s_->values[static_cast<std::size_t>(j * s_->nrows + i)];
  }
  value_t& value(index_t i, index_t j) noexcept {
    return s_->values[static_cast<std::size_t>(j * s_->nrows + i)];
  }

  /// Rows [first, last) for which diagonal `offset` stays inside the matrix.
  std::pair<index_t, index_t> row_range(index_t offset) const noexcept;

  long use_count() const noexcept { return s_.use_count(); }
  bool shares_storage_with(const DiaMatrix& other) const noexcept { return s_ == other.s_; }

 private:
  struct Storage {
    index_t nrows = 0;
    index_t ncols = 0;
    std::vector<index_t> offsets;
    std::vector<value_t> values;
  };
  std::shared_ptr<Storage> s_;
};

template <class T>
concept SparseContainer = std::same_as<T, CooMatrix> || std::same_as<T, CsrMatrix> ||
                          std::same_as<T, DiaMatrix>;

/// Holds exactly one concrete sparse container; the active variant is the
/// matrix's current storage format. Copies are shallow, like the payloads.
class DynamicMatrix {
 public:
  using Payload = std::variant<CooMatrix, CsrMatrix, DiaMatrix>;

  DynamicMatrix() = default;
  DynamicMatrix(CooMatrix m) : payload_(std::move(m)) {}
  DynamicMatrix(CsrMatrix m) : payload_(std::move(m)) {}
  DynamicMatrix(DiaMatrix m) : payload_(std::move(m)) {}

  FormatId active() const noexcept { return static_cast<FormatId>(payload_.index()); }

  /// Switches the active format. The new payload is an empty 0x0 container
  /// of the target format; use convert_inplace() to keep the data.
  void activate(FormatId target);
  void activate(int format_index) { activate(format_from_index(format_index)); }

  index_t nrows() const noexcept {
    return std::visit([](const auto& m) { return m.nrows(); }, payload_);
  }
  index_t ncols() const noexcept {
    return std::visit([](const auto& m) { return m.ncols(); }, payload_);
  }
  index_t nnz() const noexcept {
    return std::visit([](const auto& m) { return m.nnz(); }, payload_);
  }
  MemorySpace space() const noexcept { return MemorySpace::Host; }

  Payload& payload() noexcept { return payload_; }
  const Payload& payload() const noexcept { return payload_; }

  template <SparseContainer T>
  T& get() {
    if (auto* p = std::get_if<T>(&payload_)) return *p;
    throw Error(ErrorCode::TypeMismatch, "requested format is not active");
  }
  template <SparseContainer T>
  const T& get() const {
    if (const auto* p = std::get_if<T>(&payload_)) return *p;
    throw Error(ErrorCode::TypeMismatch, "requested format is not active");
  }

  template <class F>
  decltype(auto) visit(F&& f) {
    return std::visit(std::forward<F>(f), payload_);
  }
  template <class F>
  decltype(auto) visit(F&& f) const {
    return std::visit(std::forward<F>(f), payload_);
  }

 private:
  Payload payload_;
};

template <class T>
concept MatrixLike = SparseContainer<T> || std::same_as<T, DynamicMatrix>;

// ---------------------------------------------------------------------------
// Validated construction.
// ---------------------------------------------------------------------------

CooMatrix build_coo(index_t nrows, index_t ncols, std::span<const index_t> rows,
                    std::span<const index_t> cols, std::span<const value_t> values);

CsrMatrix build_csr(index_t nrows, index_t ncols, std::span<const index_t> row_offsets,
                    std::span<const index_t> cols, std::span<const value_t> values);

/// `values` is the logical nrows x ndiags array (row i, diagonal j).
DiaMatrix build_dia(index_t nrows, index_t ncols, std::span<const index_t> offsets,
                    const DenseMatrix& values);

/// Re-checks every invariant of an existing container; throws like build_*.
void validate(const CooMatrix& m);
void validate(const CsrMatrix& m);
void validate(const DiaMatrix& m);

// ---------------------------------------------------------------------------
// Entry enumeration.
// ---------------------------------------------------------------------------

/// Calls f(row, col, value) once per structural nonzero. CSR is visited
/// row-major with sorted columns; DIA row-major, skipping padding and stored
/// zeros (the format cannot tell explicit zeros from fill); COO in storage
/// order.
template <class F>
void for_each_nonzero(const CooMatrix& m, F&& f) {
  auto r = m.row_indices();
  auto c = m.col_indices();
  auto v = m.values();
  for (std::size_t k = 0; k < v.size(); ++k) f(r[k], c[k], v[k]);
}

template <class F>
void for_each_nonzero(const CsrMatrix& m, F&& f) {
  auto off = m.row_offsets();
  auto c = m.col_indices();
  auto v = m.values();
  for (index_t i = 0; i < m.nrows(); ++i)
    for (index_t k = off[i]; k < off[i + 1]; ++k) f(i, c[k], v[k]);
}

template <class F>
void for_each_nonzero(const DiaMatrix& m, F&& f) {
  auto off = m.offsets();
  const index_t nd = m.ndiags();
  for (index_t i = 0; i < m.nrows(); ++i) {
    for (index_t j = 0; j < nd; ++j) {
      const index_t col = i + off[j];
      if (col < 0 || col >= m.ncols()) continue;
      const value_t v = m.value(i, j);
      if (v != 0.0) f(i, col, v);
    }
  }
}

template <class F>
void for_each_nonzero(const DynamicMatrix& m, F&& f) {
  m.visit([&](const auto& concrete) { for_each_nonzero(concrete, f); });
}

template <MatrixLike M>
std::vector<Entry> nonzero_entries(const M& m) {
  std::vector<Entry> out;
  out.reserve(static_cast<std::size_t>(m.nnz()));
  for_each_nonzero(m, [&](index_t i, index_t j, value_t v) { out.push_back({i, j, v}); });
  return out;
}

}  // namespace dynsparse
