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

#include "dynsparse/containers.hpp"

#include <algorithm>
#include <cctype>
#include <string>

namespace dynsparse {

std::string_view error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::NonMonotoneOffsets: return "NonMonotoneOffsets";
    case ErrorCode::UnsortedRow: return "UnsortedRow";
    case ErrorCode::DuplicateOffset: return "DuplicateOffset";
    case ErrorCode::UnsortedOffsets: return "UnsortedOffsets";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::NonzeroPadding: return "NonzeroPadding";
    case ErrorCode::UnknownFormat: return "UnknownFormat";
    case ErrorCode::TypeMismatch: return "TypeMismatch";
    case ErrorCode::IncompatibleContainers: return "IncompatibleContainers";
    case ErrorCode::DiaFillOverflow: return "DiaFillOverflow";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::StructurallyAbsentDiagonal: return "StructurallyAbsentDiagonal";
    case ErrorCode::BreakdownZeroCurvature: return "BreakdownZeroCurvature";
    case ErrorCode::ValidationFailed: return "ValidationFailed";
    case ErrorCode::EmptySearchSpace: return "EmptySearchSpace";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

FormatId format_from_index(int index) {
  if (index < 0 || index >= kNumFormats)
    throw Error(ErrorCode::UnknownFormat, "format index " + std::to_string(index));
  return static_cast<FormatId>(index);
}

std::string_view format_name(FormatId f) noexcept {
  switch (f) {
    case FormatId::Coo: return "coo";
    case FormatId::Csr: return "csr";
    case FormatId::Dia: return "dia";
  }
  return "unknown";
}

FormatId parse_format(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "coo") return FormatId::Coo;
  if (lower == "csr") return FormatId::Csr;
  if (lower == "dia") return FormatId::Dia;
  throw Error(ErrorCode::UnknownFormat, "format name '" + std::string(name) + "'");
}

namespace {

void check_dims(index_t nrows, index_t ncols) {
  if (nrows < 0 || ncols < 0)
    throw Error(ErrorCode::InvalidArgument, "negative matrix dimension");
}

std::size_t sz(index_t n) { return static_cast<std::size_t>(n); }

}  // namespace

DenseMatrix::DenseMatrix(std::initializer_list<std::initializer_list<value_t>> rows)
    : nrows_(static_cast<index_t>(rows.size())),
      ncols_(rows.size() == 0 ? 0 : static_cast<index_t>(rows.begin()->size())) {
  data_.reserve(sz(nrows_ * ncols_));
  for (const auto& r : rows) {
    if (static_cast<index_t>(r.size()) != ncols_)
      throw Error(ErrorCode::ShapeMismatch, "ragged dense matrix initializer");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

// -- COO --------------------------------------------------------------------

CooMatrix::CooMatrix() : s_(std::make_shared<Storage>()) {}

CooMatrix::CooMatrix(index_t nrows, index_t ncols, index_t nnz) : s_(std::make_shared<Storage>()) {
  check_dims(nrows, ncols);
  s_->nrows = nrows;
  s_->ncols = ncols;
  s_->rows.assign(sz(nnz), 0);
  s_->cols.assign(sz(nnz), 0);
  s_->values.assign(sz(nnz), 0.0);
}

CooMatrix::CooMatrix(index_t nrows, index_t ncols, std::vector<index_t> rows,
                     std::vector<index_t> cols, std::vector<value_t> values)
    : s_(std::make_shared<Storage>(
          Storage{nrows, ncols, std::move(rows), std::move(cols), std::move(values)})) {}

// -- CSR --------------------------------------------------------------------

CsrMatrix::CsrMatrix() : s_(std::make_shared<Storage>()) { s_->offsets.assign(1, 0); }

CsrMatrix::CsrMatrix(index_t nrows, index_t ncols, index_t nnz) : s_(std::make_shared<Storage>()) {
  check_dims(nrows, ncols);
  s_->nrows = nrows;
  s_->ncols = ncols;
  s_->offsets.assign(sz(nrows + 1), 0);
  s_->cols.assign(sz(nnz), 0);
  s_->values.assign(sz(nnz), 0.0);
}

CsrMatrix::CsrMatrix(index_t nrows, index_t ncols, std::vector<index_t> row_offsets,
                     std::vector<index_t> cols, std::vector<value_t> values)
    : s_(std::make_shared<Storage>(
          Storage{nrows, ncols, std::move(row_offsets), std::move(cols), std::move(values)})) {}

// -- DIA --------------------------------------------------------------------

DiaMatrix::DiaMatrix() : s_(std::make_shared<Storage>()) {}

DiaMatrix::DiaMatrix(index_t nrows, index_t ncols, index_t ndiags)
    : s_(std::make_shared<Storage>()) {
  check_dims(nrows, ncols);
  s_->nrows = nrows;
  s_->ncols = ncols;
  s_->offsets.assign(sz(ndiags), 0);
  s_->values.assign(sz(ndiags * nrows), 0.0);
}

DiaMatrix::DiaMatrix(index_t nrows, index_t ncols, std::vector<index_t> offsets,
                     std::vector<value_t> diagonal_major_values)
    : s_(std::make_shared<Storage>(
          Storage{nrows, ncols, std::move(offsets), std::move(diagonal_major_values)})) {}

index_t DiaMatrix::nnz() const noexcept {
  return static_cast<index_t>(
      std::count_if(s_->values.begin(), s_->values.end(), [](value_t v) { return v != 0.0; }));
}

std::pair<index_t, index_t> DiaMatrix::row_range(index_t offset) const noexcept {
  const index_t first = std::max<index_t>(0, -offset);
  const index_t last = std::min<index_t>(s_->nrows, s_->ncols - offset);
  return {first, std::max(first, last)};
}

// -- Dynamic ----------------------------------------------------------------

void DynamicMatrix::activate(FormatId target) {
  if (static_cast<int>(target) < 0 || static_cast<int>(target) >= kNumFormats)
    throw Error(ErrorCode::UnknownFormat, "format index " + std::to_string(static_cast<int>(target)));
  if (target == active()) return;
  switch (target) {
    case FormatId::Coo: payload_.emplace<CooMatrix>(); break;
    case FormatId::Csr: payload_.emplace<CsrMatrix>(); break;
    case FormatId::Dia: payload_.emplace<DiaMatrix>(); break;
  }
}

// -- Validation -------------------------------------------------------------

void validate(const CooMatrix& m) {
  check_dims(m.nrows(), m.ncols());
  auto r = m.row_indices();
  auto c = m.col_indices();
  if (r.size() != c.size() || r.size() != m.values().size())
    throw Error(ErrorCode::LengthMismatch, "COO arrays differ in length");
  for (std::size_t k = 0; k < r.size(); ++k) {
    if (r[k] < 0 || r[k] >= m.nrows())
      throw Error(ErrorCode::IndexOutOfRange,
                  "COO row index " + std::to_string(r[k]) + " at entry " + std::to_string(k),
                  static_cast<index_t>(k));
    if (c[k] < 0 || c[k] >= m.ncols())
      throw Error(ErrorCode::IndexOutOfRange,
                  "COO column index " + std::to_string(c[k]) + " at entry " + std::to_string(k),
                  static_cast<index_t>(k));
  }
}

void validate(const CsrMatrix& m) {
  check_dims(m.nrows(), m.ncols());
  auto off = m.row_offsets();
  auto c = m.col_indices();
  if (static_cast<index_t>(off.size()) != m.nrows() + 1)
    throw Error(ErrorCode::LengthMismatch, "row_offsets must have nrows + 1 entries");
  if (off[0] != 0) throw Error(ErrorCode::NonMonotoneOffsets, "row_offsets[0] must be 0");
  for (index_t i = 0; i < m.nrows(); ++i)
    if (off[i + 1] < off[i])
      throw Error(ErrorCode::NonMonotoneOffsets, "row_offsets decrease at row " + std::to_string(i), i);
  if (c.size() != m.values().size())
    throw Error(ErrorCode::LengthMismatch, "column and value arrays differ in length");
  if (off[m.nrows()] != static_cast<index_t>(c.size()))
    throw Error(ErrorCode::LengthMismatch, "row_offsets[nrows] does not equal nnz");
  for (index_t i = 0; i < m.nrows(); ++i) {
    for (index_t k = off[i]; k < off[i + 1]; ++k) {
      if (c[k] < 0 || c[k] >= m.ncols())
        throw Error(ErrorCode::IndexOutOfRange,
                    "CSR column index " + std::to_string(c[k]) + " in row " + std::to_string(i), i);
      if (k > off[i] && c[k] <= c[k - 1])
        throw Error(ErrorCode::UnsortedRow, "columns not strictly increasing in row " + std::to_string(i), i);
    }
  }
}

void validate(const DiaMatrix& m) {
  check_dims(m.nrows(), m.ncols());
  auto off = m.offsets();
  if (static_cast<index_t>(m.values().size()) != m.ndiags() * m.nrows())
    throw Error(ErrorCode::ShapeMismatch, "DIA values must hold nrows x ndiags entries");
  for (index_t j = 0; j < m.ndiags(); ++j) {
    if (j > 0 && off[j] == off[j - 1])
      throw Error(ErrorCode::DuplicateOffset, "diagonal offset " + std::to_string(off[j]) + " repeated", j);
    if (j > 0 && off[j] < off[j - 1])
      throw Error(ErrorCode::UnsortedOffsets, "diagonal offsets not increasing", j);
  }
  for (index_t j = 0; j < m.ndiags(); ++j) {
    if (off[j] <= -m.nrows() || off[j] >= m.ncols())
      throw Error(ErrorCode::IndexOutOfRange, "diagonal offset " + std::to_string(off[j]) + " outside matrix", j);
    const auto [first, last] = m.row_range(off[j]);
    auto d = m.diagonal(j);
    for (index_t i = 0; i < m.nrows(); ++i) {
      if (i >= first && i < last) continue;
      if (d[sz(i)] != 0.0)
        throw Error(ErrorCode::NonzeroPadding,
                    "padding slot (row " + std::to_string(i) + ", offset " + std::to_string(off[j]) +
                        ") is not 0.0",
                    i);
    }
  }
}

// -- Builders ---------------------------------------------------------------

CooMatrix build_coo(index_t nrows, index_t ncols, std::span<const index_t> rows,
                    std::span<const index_t> cols, std::span<const value_t> values) {
  if (rows.size() != cols.size() || rows.size() != values.size())
    throw Error(ErrorCode::LengthMismatch, "COO arrays differ in length");
  CooMatrix m(nrows, ncols, {rows.begin(), rows.end()}, {cols.begin(), cols.end()},
              {values.begin(), values.end()});
  validate(m);
  return m;
}

CsrMatrix build_csr(index_t nrows, index_t ncols, std::span<const index_t> row_offsets,
                    std::span<const index_t> cols, std::span<const value_t> values) {
  if (nrows < 0 || static_cast<index_t>(row_offsets.size()) != nrows + 1)
    throw Error(ErrorCode::LengthMismatch, "row_offsets must have nrows + 1 entries");
  CsrMatrix m(nrows, ncols, {row_offsets.begin(), row_offsets.end()}, {cols.begin(), cols.end()},
              {values.begin(), values.end()});
  validate(m);
  return m;
}

DiaMatrix build_dia(index_t nrows, index_t ncols, std::span<const index_t> offsets,
                    const DenseMatrix& values) {
  const auto ndiags = static_cast<index_t>(offsets.size());
  if (values.nrows() != nrows || values.ncols() != ndiags)
    throw Error(ErrorCode::ShapeMismatch, "DIA values must be nrows x len(offsets)");
  std::vector<value_t> packed(sz(nrows * ndiags));
  for (index_t i = 0; i < nrows; ++i)
    for (index_t j = 0; j < ndiags; ++j) packed[sz(j * nrows + i)] = values(i, j);
  DiaMatrix m(nrows, ncols, {offsets.begin(), offsets.end()}, std::move(packed));
  validate(m);
  return m;
}

}  // namespace dynsparse
