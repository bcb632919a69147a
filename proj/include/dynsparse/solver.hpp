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
#include <vector>

#include "dynsparse/containers.hpp"
#include "dynsparse/kernels.hpp"
#include "dynsparse/stencil.hpp"

namespace dynsparse {

struct CgOptions {
  value_t tol = 1e-9;  // on ||r|| / ||b||
  index_t max_iters = 500;
};

struct CgResult {
  /// One vector for a plain matrix, one owned-length vector per partition
  /// for a split system.
  std::vector<DenseVector> x;
  index_t iterations = 0;
  /// ||r_k|| / ||b|| for k = 0 .. iterations.
  std::vector<value_t> residual_history;
  bool converged = false;
};

/// Unpreconditioned conjugate gradient. Throws BreakdownZeroCurvature when
/// p^T A p <= 0.
CgResult cg(const ExecBackend& backend, const CooMatrix& a, std::span<const value_t> b,
            std::span<const value_t> x0, const CgOptions& opts = {});
CgResult cg(const ExecBackend& backend, const CsrMatrix& a, std::span<const value_t> b,
            std::span<const value_t> x0, const CgOptions& opts = {});
CgResult cg(const ExecBackend& backend, const DiaMatrix& a, std::span<const value_t> b,
            std::span<const value_t> x0, const CgOptions& opts = {});
CgResult cg(const ExecBackend& backend, const DynamicMatrix& a, std::span<const value_t> b,
            std::span<const value_t> x0, const CgOptions& opts = {});

/// Distributed form. b and x0 hold one owned-length (or full-length) vector
/// per partition; dot products sum owned entries only.
CgResult cg(const ExecBackend& backend, const PartitionedProblem& p,
            std::span<const SplitMatrix> splits, const PartitionVectors& b,
            const PartitionVectors& x0, const CgOptions& opts = {});

inline constexpr value_t kValidationDiagonal = 1.0e6;
inline constexpr value_t kValidationTolerance = 1e-12;
inline constexpr index_t kValidationMaxIters = 50;
inline constexpr index_t kValidationIterationBound = 12;

struct ValidationReport {
  index_t iterations = 0;
  value_t final_relative_residual = 0.0;
  bool converged = false;
  bool passed = false;

  /// Throws ValidationFailed unless passed.
  void require() const;
};

/// Replaces every diagonal of the local parts with kValidationDiagonal,
/// solves against b = A * 1 and checks convergence within
/// kValidationIterationBound iterations. The original diagonals are put back
/// before returning, also on error.
ValidationReport validate_solver(const ExecBackend& backend, const PartitionedProblem& p,
                                 std::span<SplitMatrix> splits);

}  // namespace dynsparse
