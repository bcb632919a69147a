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

#include <array>
#include <span>
#include <vector>

#include "dynsparse/containers.hpp"
#include "dynsparse/kernels.hpp"

namespace dynsparse {

inline constexpr value_t kStencilDiagonal = 26.0;
inline constexpr value_t kStencilOffDiagonal = -1.0;

/// Per-partition grid extents and the 3-D partition grid. The global grid is
/// (nx*px) x (ny*py) x (nz*pz).
struct GridSpec {
  index_t nx = 1, ny = 1, nz = 1;
  int px = 1, py = 1, pz = 1;

  int npartitions() const noexcept { return px * py * pz; }
  index_t local_points() const noexcept { return nx * ny * nz; }
  std::array<index_t, 3> global_extents() const noexcept { return {nx * px, ny * py, nz * pz}; }
  void validate() const;
};

/// Exchange with one neighbouring partition. `send_local` lists owned
/// indices this partition ships to `rank`; `recv_ghost` lists the ghost
/// slots filled from `rank`. Both are ordered by the owner's local index, so
/// a sender's list lines up element by element with the receiver's.
struct HaloNeighbor {
  int rank = 0;
  std::vector<index_t> send_local;
  std::vector<index_t> recv_ghost;
};

struct HaloPlan {
  std::vector<HaloNeighbor> neighbors;  // ascending rank
  index_t ghost_count = 0;

  const HaloNeighbor* find(int rank) const noexcept;
};

struct Partition {
  int rank = 0;
  std::array<int, 3> coords{};
  index_t local_n = 0;
  /// local_n x (local_n + ghost_count); columns >= local_n are ghost slots.
  CsrMatrix a_full;
  DenseVector b;
  DenseVector xexact;
  HaloPlan halo;
  /// Global point id of every owned row followed by every ghost slot.
  std::vector<index_t> global_ids;
};

struct PartitionedProblem {
  GridSpec grid;
  std::vector<Partition> partitions;

  int npartitions() const noexcept { return static_cast<int>(partitions.size()); }
  index_t global_rows() const noexcept;
};

/// Square block over owned columns and rectangular block over ghost slots.
struct SplitMatrix {
  DynamicMatrix local;
  DynamicMatrix remote;
};

/// One vector per partition, owned entries first, then ghost slots.
using PartitionVectors = std::vector<DenseVector>;

/// 27-point Poisson stencil (26 on the diagonal, -1 per neighbour) with
/// b = A * 1 and rows owned by 3-D blocks.
PartitionedProblem generate_problem(const GridSpec& spec);

SplitMatrix split_local_remote(const PartitionedProblem& p, int partition);
std::vector<SplitMatrix> split_all(const PartitionedProblem& p);

/// Vectors sized local_n + ghost_count per partition.
PartitionVectors make_vectors(const PartitionedProblem& p, value_t fill = 0.0);

/// Global vector (indexed by global point id) -> owned entries of every
/// partition; ghost slots are zero.
PartitionVectors scatter_owned(const PartitionedProblem& p, std::span<const value_t> global);
DenseVector gather_owned(const PartitionedProblem& p, const PartitionVectors& x);

/// Copies every owner value into the ghost slots that mirror it.
void exchange_halo(const PartitionedProblem& p, PartitionVectors& x);

struct SpmvTimings {
  std::vector<double> partition_seconds;  // accumulated per partition
  double exchange_seconds = 0.0;
};

/// exchange_halo, then y_p = local_p * x_owned + remote_p * x_ghost for each
/// partition. y vectors may be owned-length or full-length; only owned
/// entries are written.
void distributed_spmv(const ExecBackend& backend, const PartitionedProblem& p,
                      std::span<const SplitMatrix> splits, PartitionVectors& x,
                      PartitionVectors& y, SpmvTimings* timings = nullptr);

}  // namespace dynsparse
