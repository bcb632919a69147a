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

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dynsparse/kernels.hpp"
#include "dynsparse/tuner.hpp"

namespace dynsparse {

struct BenchConfig {
  index_t nx = 16, ny = 16, nz = 16;
  int px = 1, py = 1, pz = 1;
  PlanMode mode = PlanMode::Fixed;
  FormatId local_format = FormatId::Csr;
  FormatId remote_format = FormatId::Csr;
  index_t iters = 500;
  int reps = 5;
  bool tune = false;
  ExecBackend::Kind backend = ExecBackend::Kind::Serial;
  int threads = 1;
  value_t cg_tol = 1e-9;
  index_t cg_max_iters = 50;  // 0 skips the CG solve
  std::uint64_t seed = 42;
  std::optional<index_t> dia_fill_limit;
  /// Load the timing table from CSV instead of profiling.
  std::optional<std::string> table_input;
  /// Export the timing table used for tuning.
  std::optional<std::string> table_output;

  ExecBackend exec_backend() const;
  friend bool operator==(const BenchConfig&, const BenchConfig&) = default;
};

struct PartitionReport {
  int partition = 0;
  FormatId local_format = FormatId::Csr;
  FormatId remote_format = FormatId::Csr;
  index_t local_n = 0;
  index_t ghost_count = 0;
  index_t local_nnz = 0;
  index_t remote_nnz = 0;
  bool remote_empty = false;
  double reference_spmv_time = 0.0;
  std::optional<double> optimized_spmv_time;
  friend bool operator==(const PartitionReport&, const PartitionReport&) = default;
};

enum class ValidationStatus { NotRun, Passed, Failed };

std::string_view validation_status_name(ValidationStatus s) noexcept;
ValidationStatus parse_validation_status(std::string_view s);

struct RunReport {
  BenchConfig config;

  // Phase timings in seconds; absent when the phase did not run.
  std::optional<double> setup;
  std::optional<double> reference_spmv_time;
  std::optional<double> optimized_spmv_time;
  std::optional<double> cg_time;
  std::optional<double> ratio;  // reference / optimized

  ValidationStatus validation = ValidationStatus::NotRun;
  std::optional<index_t> validation_iterations;

  /// Largest relative difference between the reference and optimized SpMV
  /// on a seeded random vector.
  std::optional<double> verification_max_rel_diff;

  std::optional<index_t> cg_iterations;
  std::optional<bool> cg_converged;
  std::optional<double> cg_relative_residual;

  std::vector<PartitionReport> partitions;
  /// Phases in the order they ran.
  std::vector<std::string> phases;
  std::vector<std::string> notes;
  std::optional<std::string> error;

  friend bool operator==(const RunReport&, const RunReport&) = default;
};

/// Phase order: setup, reference timing (all CSR), optimization setup,
/// verification, validation, optimized timing (+ optional CG). A conversion
/// error or failed validation stops the run and is recorded in the report.
RunReport run_benchmark(const BenchConfig& config);

/// 0 on success, 2 after failed validation, 3 after a conversion error.
int exit_code(const RunReport& r) noexcept;

enum class ReportFormat { Json, Csv };

std::string report_to_json(const RunReport& r);
RunReport report_from_json(std::string_view text);

/// One row per partition; run-level columns repeat on every row.
std::string report_to_csv(const RunReport& r);
RunReport report_from_csv(std::string_view text);

/// Writes to `path`, or to standard output when path is empty.
void emit_report(const RunReport& r, ReportFormat format, const std::filesystem::path& path = {});

}  // namespace dynsparse
