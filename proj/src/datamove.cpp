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

#include "dynsparse/datamove.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>

namespace dynsparse {

namespace {

std::size_t sz(index_t n) { return static_cast<std::size_t>(n); }

[[noreturn]] void incompatible(const char* what) {
  throw Error(ErrorCode::IncompatibleContainers, what);
}

template <class T>
void copy_array(std::span<const T> src, std::span<T> dst) {
  if (src.size() != dst.size()) incompatible("buffer lengths differ");
  std::copy(src.begin(), src.end(), dst.begin());
}

void check_shape(index_t sr, index_t sc, index_t dr, index_t dc) {
  if (sr != dr || sc != dc) incompatible("dimensions differ");
}

bool is_canonical(const CooMatrix& m) {
  auto r = m.row_indices();
  auto c = m.col_indices();
  for (std::size_t k = 1; k < r.size(); ++k) {
    if (r[k] < r[k - 1]) return false;
    if (r[k] == r[k - 1] && c[k] <= c[k - 1]) return false;
  }
  return true;
}

}  // namespace

// -- Copies -----------------------------------------------------------------

void shallow_copy(const DynamicMatrix& src, DynamicMatrix& dst) {
  if (src.active() != dst.active() || src.space() != dst.space())
    throw Error(ErrorCode::TypeMismatch,
                "shallow copy from " + std::string(format_name(src.active())) + " into " +
                    std::string(format_name(dst.active())) + " slot");
  dst = src;
}

void deep_copy(const CooMatrix& src, CooMatrix& dst) {
  if (src.shares_storage_with(dst)) return;
  check_shape(src.nrows(), src.ncols(), dst.nrows(), dst.ncols());
  if (src.nnz() != dst.nnz()) incompatible("nnz differs");
  copy_array(src.row_indices(), dst.row_indices());
  copy_array(src.col_indices(), dst.col_indices());
  copy_array(src.values(), dst.values());
}

void deep_copy(const CsrMatrix& src, CsrMatrix& dst) {
  if (src.shares_storage_with(dst)) return;
  check_shape(src.nrows(), src.ncols(), dst.nrows(), dst.ncols());
  if (src.nnz() != dst.nnz()) incompatible("nnz differs");
  copy_array(src.row_offsets(), dst.row_offsets());
  copy_array(src.col_indices(), dst.col_indices());
  copy_array(src.values(), dst.values());
}

void deep_copy(const DiaMatrix& src, DiaMatrix& dst) {
  if (src.shares_storage_with(dst)) return;
  check_shape(src.nrows(), src.ncols(), dst.nrows(), dst.ncols());
  if (src.ndiags() != dst.ndiags()) incompatible("ndiags differs");
  copy_array(src.offsets(), dst.offsets());
  copy_array(src.values(), dst.values());
}

void deep_copy(const DynamicMatrix& src, DynamicMatrix& dst) {
  if (src.active() != dst.active()) incompatible("formats differ");
  dst.visit([&](auto& d) {
    using T = std::decay_t<decltype(d)>;
    deep_copy(std::get<T>(src.payload()), d);
  });
}

void deep_copy(const DenseVector& src, DenseVector& dst) {
  if (src.size() != dst.size()) incompatible("vector lengths differ");
  std::copy(src.begin(), src.end(), dst.begin());
}

CooMatrix create_compatible(const CooMatrix& src) {
  return CooMatrix(src.nrows(), src.ncols(), src.nnz());
}
CsrMatrix create_compatible(const CsrMatrix& src) {
  return CsrMatrix(src.nrows(), src.ncols(), src.nnz());
}
DiaMatrix create_compatible(const DiaMatrix& src) {
  return DiaMatrix(src.nrows(), src.ncols(), src.ndiags());
}
DynamicMatrix create_compatible(const DynamicMatrix& src) {
  return src.visit([](const auto& m) { return DynamicMatrix(create_compatible(m)); });
}

// -- Conversion -------------------------------------------------------------

index_t default_dia_fill_limit(index_t nnz, index_t nrows) noexcept {
  return 10 * std::max(nnz, nrows);
}

CooMatrix canonicalize_coo(const CooMatrix& m) {
  auto r = m.row_indices();
  auto c = m.col_indices();
  auto v = m.values();
  const std::size_t n = v.size();

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  if (!is_canonical(m)) {
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return r[a] < r[b] || (r[a] == r[b] && c[a] < c[b]);
    });
  }

  std::vector<index_t> rows, cols;
  std::vector<value_t> vals;
  rows.reserve(n);
  cols.reserve(n);
  vals.reserve(n);
  for (std::size_t k : order) {
    if (!rows.empty() && rows.back() == r[k] && cols.back() == c[k]) {
      vals.back() += v[k];
    } else {
      rows.push_back(r[k]);
      cols.push_back(c[k]);
      vals.push_back(v[k]);
    }
  }
  return CooMatrix(m.nrows(), m.ncols(), std::move(rows), std::move(cols), std::move(vals));
}

CooMatrix to_coo(const CooMatrix& m) { return canonicalize_coo(m); }

CooMatrix to_coo(const CsrMatrix& m) {
  std::vector<index_t> rows(sz(m.nnz()));
  auto off = m.row_offsets();
  for (index_t i = 0; i < m.nrows(); ++i)
    std::fill(rows.begin() + off[i], rows.begin() + off[i + 1], i);
  auto c = m.col_indices();
  auto v = m.values();
  return CooMatrix(m.nrows(), m.ncols(), std::move(rows), {c.begin(), c.end()},
                   {v.begin(), v.end()});
}

CooMatrix to_coo(const DiaMatrix& m) {
  std::vector<index_t> rows, cols;
  std::vector<value_t> vals;
  for_each_nonzero(m, [&](index_t i, index_t j, value_t v) {
    rows.push_back(i);
    cols.push_back(j);
    vals.push_back(v);
  });
  return CooMatrix(m.nrows(), m.ncols(), std::move(rows), std::move(cols), std::move(vals));
}

CooMatrix to_coo(const DynamicMatrix& m) {
  return m.visit([](const auto& concrete) { return to_coo(concrete); });
}

CsrMatrix coo_to_csr(const CooMatrix& input) {
  const CooMatrix m = is_canonical(input) ? input : canonicalize_coo(input);
  auto r = m.row_indices();
  std::vector<index_t> offsets(sz(m.nrows() + 1), 0);
  for (index_t row : r) ++offsets[sz(row + 1)];
  std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());
  auto c = m.col_indices();
  auto v = m.values();
  return CsrMatrix(m.nrows(), m.ncols(), std::move(offsets), {c.begin(), c.end()},
                   {v.begin(), v.end()});
}

DiaMatrix coo_to_dia(const CooMatrix& input, const ConvertOptions& opts) {
  const CooMatrix m = is_canonical(input) ? input : canonicalize_coo(input);
  const index_t nrows = m.nrows();
  const index_t ncols = m.ncols();
  auto r = m.row_indices();
  auto c = m.col_indices();
  auto v = m.values();

  // Offset d lands in slot d + nrows - 1.
  std::vector<index_t> slot(sz(std::max<index_t>(nrows + ncols - 1, 0)), -1);
  for (std::size_t k = 0; k < v.size(); ++k) slot[sz(c[k] - r[k] + nrows - 1)] = 0;
  std::vector<index_t> offsets;
  for (std::size_t s = 0; s < slot.size(); ++s) {
    if (slot[s] < 0) continue;
    slot[s] = static_cast<index_t>(offsets.size());
    offsets.push_back(static_cast<index_t>(s) - nrows + 1);
  }

  const index_t ndiags = static_cast<index_t>(offsets.size());
  const index_t limit = opts.dia_fill_limit.value_or(default_dia_fill_limit(m.nnz(), nrows));
  if (ndiags * nrows > limit)
    throw Error(ErrorCode::DiaFillOverflow,
                std::to_string(ndiags) + " diagonals x " + std::to_string(nrows) + " rows = " +
                    std::to_string(ndiags * nrows) + " slots exceeds limit " +
                    std::to_string(limit));

  std::vector<value_t> values(sz(ndiags * nrows), 0.0);
  for (std::size_t k = 0; k < v.size(); ++k) {
    const index_t j = slot[sz(c[k] - r[k] + nrows - 1)];
    values[sz(j * nrows + r[k])] = v[k];
  }
  return DiaMatrix(nrows, ncols, std::move(offsets), std::move(values));
}

void convert_inplace(DynamicMatrix& m, FormatId target, const ConvertOptions& opts) {
  format_from_index(static_cast<int>(target));
  if (m.active() == target) return;
  DynamicMatrix converted = convert(m, target, opts);
  m = std::move(converted);
}

// -- Matrix Market ----------------------------------------------------------

namespace {

std::string lowercase(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  return s;
}

[[noreturn]] void parse_error(index_t line, const std::string& what) {
  throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + what, line);
}

bool blank(const std::string& s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char ch) { return std::isspace(ch); });
}

}  // namespace

CooMatrix read_matrix_market(std::istream& in) {
  std::string line;
  index_t lineno = 0;

  if (!std::getline(in, line)) parse_error(1, "empty input");
  ++lineno;
  std::istringstream header(line);
  std::string banner, object, layout, field, symmetry;
  header >> banner >> object >> layout >> field >> symmetry;
  if (banner != "%%MatrixMarket") parse_error(lineno, "missing %%MatrixMarket banner");
  object = lowercase(object);
  layout = lowercase(layout);
  field = lowercase(field);
  symmetry = lowercase(symmetry);
  if (object != "matrix") parse_error(lineno, "unsupported object '" + object + "'");
  if (layout != "coordinate") parse_error(lineno, "unsupported layout '" + layout + "'");
  const bool pattern = field == "pattern";
  if (!pattern && field != "real" && field != "integer" && field != "double")
    parse_error(lineno, "unsupported field '" + field + "'");
  const bool symmetric = symmetry == "symmetric";
  const bool skew = symmetry == "skew-symmetric";
  if (!symmetric && !skew && symmetry != "general")
    parse_error(lineno, "unsupported symmetry '" + symmetry + "'");

  // Size line, after any comments.
  index_t nrows = -1, ncols = -1, declared = -1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '%' || blank(line)) continue;
    std::istringstream ss(line);
    if (!(ss >> nrows >> ncols >> declared) || nrows < 0 || ncols < 0 || declared < 0)
      parse_error(lineno, "malformed size line");
    break;
  }
  if (declared < 0) parse_error(lineno, "missing size line");

  std::vector<index_t> rows, cols;
  std::vector<value_t> vals;
  rows.reserve(sz(declared));
  cols.reserve(sz(declared));
  vals.reserve(sz(declared));
  index_t seen = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '%' || blank(line)) continue;
    if (seen == declared) parse_error(lineno, "more entries than declared");
    std::istringstream ss(line);
    index_t i = 0, j = 0;
    value_t v = 1.0;
    if (!(ss >> i >> j)) parse_error(lineno, "malformed entry");
    if (!pattern) {
      std::string tok;
      if (!(ss >> tok)) parse_error(lineno, "missing value");
      char* end = nullptr;
      v = std::strtod(tok.c_str(), &end);
      if (end != tok.c_str() + tok.size()) parse_error(lineno, "malformed value '" + tok + "'");
    }
    if (i < 1 || i > nrows || j < 1 || j > ncols) parse_error(lineno, "index out of range");
    rows.push_back(i - 1);
    cols.push_back(j - 1);
    vals.push_back(v);
    if ((symmetric || skew) && i != j) {
      rows.push_back(j - 1);
      cols.push_back(i - 1);
      vals.push_back(skew ? -v : v);
    }
    ++seen;
  }
  if (seen != declared)
    parse_error(lineno, "expected " + std::to_string(declared) + " entries, found " +
                            std::to_string(seen));
  return CooMatrix(nrows, ncols, std::move(rows), std::move(cols), std::move(vals));
}

CooMatrix read_matrix_market(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  return read_matrix_market(in);
}

void write_matrix_market(std::ostream& out, index_t nrows, index_t ncols,
                         std::span<const Entry> entries) {
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << nrows << ' ' << ncols << ' ' << entries.size() << '\n';
  char buf[64];
  for (const Entry& e : entries) {
    std::snprintf(buf, sizeof buf, "%.17g", e.value);
    out << (e.row + 1) << ' ' << (e.col + 1) << ' ' << buf << '\n';
  }
  if (!out) throw Error(ErrorCode::IoError, "write failed");
}

void write_matrix_market_file(const std::filesystem::path& path, index_t nrows, index_t ncols,
                              std::span<const Entry> entries) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path.string() + " for writing");
  write_matrix_market(out, nrows, ncols, entries);
}

}  // namespace dynsparse
