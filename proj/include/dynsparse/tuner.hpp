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

#include <compare>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string_view>
#include <tuple>
#include <vector>

#include "dynsparse/datamove.hpp"
#include "dynsparse/stencil.hpp"

namespace dynsparse {

/// Storage formats of the local and remote part of one partition. Ordered
/// lexicographically by FormatId, which is also the tie-break order.
struct FormatCombo {
  FormatId local = FormatId::Csr;
  FormatId remote = FormatId::Csr;
  friend auto operator<=>(const FormatCombo&, const FormatCombo&) = default;
};

/// Every (local, remote) pair in tie-break order.
std::vector<FormatCombo> all_combos();

enum class PlanMode { Fixed, Morpheus, Ghost, Multi };

PlanMode parse_plan_mode(std::string_view name);
std::string_view plan_mode_name(PlanMode mode) noexcept;

/// Median distributed-SpMV time per (partition, combination). A combination
/// that could not be converted on some partition is skipped for all of them.
struct TimingTable {
  int npartitions = 0;
  int reps = 0;
  std::map<std::tuple<int, FormatId, FormatId>, double> seconds;
  std::set<FormatCombo> skipped;

  void set(int partition, FormatCombo c, double s) { seconds[{partition, c.local, c.remote}] = s; }
  std::optional<double> get(int partition, FormatCombo c) const;
};

using FormatPlan = std::vector<FormatCombo>;

/// Times `reps` distributed SpMV calls per combination after one untimed
/// warm-up. The splits are back in their original CSR state afterwards.
TimingTable profile_formats(const ExecBackend& backend, const PartitionedProblem& p,
                            std::span<SplitMatrix> splits, int reps,
                            const ConvertOptions& opts = {});

/// fixed: (CSR, CSR). morpheus: one local format for every partition with
/// remote CSR, chosen to minimise the slowest partition. ghost: the same with
/// roles swapped. multi: per-partition fastest combination.
/// Throws EmptySearchSpace when every candidate is skipped.
FormatPlan select_plan(const TimingTable& t, PlanMode mode);

/// convert_inplace on every part. On error the failing partition is named
/// in the message and already-converted partitions keep their new format.
void apply_plan(std::span<SplitMatrix> splits, const FormatPlan& plan,
                const ConvertOptions& opts = {});

/// CSV columns: partition,local_format,remote_format,median_seconds,reps.
/// Skipped combinations appear with median_seconds = "skipped".
void write_timing_table_csv(std::ostream& out, const TimingTable& t);
TimingTable read_timing_table_csv(std::istream& in);

}  // namespace dynsparse
