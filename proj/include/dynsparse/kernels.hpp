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

#include <span>

#include "dynsparse/containers.hpp"

namespace dynsparse {

/// Where kernels execute. Threaded splits work into `nthreads` contiguous
/// chunks on a shared worker pool.
class ExecBackend {
 public:
  enum class Kind { Serial, Threaded };

  static ExecBackend serial() noexcept { return ExecBackend(Kind::Serial, 1); }
  static ExecBackend threaded(int nthreads);

  Kind kind() const noexcept { return kind_; }
  int nthreads() const noexcept { return nthreads_; }

  friend bool operator==(const ExecBackend&, const ExecBackend&) = default;

 private:
  ExecBackend(Kind k, int n) noexcept : kind_(k), nthreads_(n) {}
  Kind kind_;
  int nthreads_;
};

// -- SpMV -------------------------------------------------------------------
//
// spmv overwrites y with A*x; spmv_add accumulates y += A*x. For CSR and DIA
// each row is summed in a fixed order, so results do not depend on the
// thread count. The threaded COO kernel merges per-thread partial rows in
// thread order.

void spmv(const ExecBackend& backend, const CooMatrix& a, std::span<const value_t> x,
          std::span<value_t> y);
void spmv(const ExecBackend& backend, const CsrMatrix& a, std::span<const value_t> x,
          std::span<value_t> y);
void spmv(const ExecBackend& backend, const DiaMatrix& a, std::span<const value_t> x,
          std::span<value_t> y);
void spmv(const ExecBackend& backend, const DynamicMatrix& a, std::span<const value_t> x,
          std::span<value_t> y);

void spmv_add(const ExecBackend& backend, const CooMatrix& a, std::span<const value_t> x,
              std::span<value_t> y);
void spmv_add(const ExecBackend& backend, const CsrMatrix& a, std::span<const value_t> x,
              std::span<value_t> y);
void spmv_add(const ExecBackend& backend, const DiaMatrix& a, std::span<const value_t> x,
              std::span<value_t> y);
void spmv_add(const ExecBackend& backend, const DynamicMatrix& a, std::span<const value_t> x,
              std::span<value_t> y);

// -- Dense vector kernels -----------------------------------------------------

value_t dot(const ExecBackend& backend, std::span<const value_t> x, std::span<const value_t> y);

/// w = alpha * x + beta * y. w may alias x or y.
void waxpby(const ExecBackend& backend, value_t alpha, std::span<const value_t> x, value_t beta,
            std::span<const value_t> y, std::span<value_t> w);

value_t reduce(const ExecBackend& backend, std::span<const value_t> x);

/// Inclusive prefix sum. The last element equals reduce() on the same
/// backend bit for bit.
DenseVector scan(const ExecBackend& backend, std::span<const value_t> x);

// -- Diagonal -----------------------------------------------------------------

DenseVector extract_diagonal(const CooMatrix& a);
DenseVector extract_diagonal(const CsrMatrix& a);
DenseVector extract_diagonal(const DiaMatrix& a);
DenseVector extract_diagonal(const DynamicMatrix& a);

/// Overwrites A(i, i) with d[i]; the sparsity structure never changes, so
/// every diagonal position must already be stored. Nothing is written if
/// any position is missing. COO duplicates of (i, i) are folded into the
/// first occurrence.
void update_diagonal(CooMatrix& a, std::span<const value_t> d);
void update_diagonal(CsrMatrix& a, std::span<const value_t> d);
void update_diagonal(DiaMatrix& a, std::span<const value_t> d);
void update_diagonal(DynamicMatrix& a, std::span<const value_t> d);

}  // namespace dynsparse
