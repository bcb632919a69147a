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

#include "dynsparse/stencil.hpp"

#include <algorithm>
#include <chrono>
#include <string>
#include <unordered_map>
#include <utility>

namespace dynsparse {

namespace {

std::size_t sz(index_t n) { return static_cast<std::size_t>(n); }

struct Layout {
  GridSpec spec;
  index_t gnx, gny, gnz;

  explicit Layout(const GridSpec& s)
      : spec(s), gnx(s.nx * s.px), gny(s.ny * s.py), gnz(s.nz * s.pz) {}

  index_t global_id(index_t gx, index_t gy, index_t gz) const { return gx + gnx * (gy + gny * gz); }

  int owner(index_t gx, index_t gy, index_t gz) const {
    const auto ipx = static_cast<int>(gx / spec.nx);
    const auto ipy = static_cast<int>(gy / spec.ny);
    const auto ipz = static_cast<int>(gz / spec.nz);
    return ipx + spec.px * (ipy + spec.py * ipz);
  }

  index_t owner_local(index_t gx, index_t gy, index_t gz) const {
    return gx % spec.nx + spec.nx * (gy % spec.ny + spec.ny * (gz % spec.nz));
  }

  std::array<int, 3> coords(int rank) const {
    return {rank % spec.px, (rank / spec.px) % spec.py, rank / (spec.px * spec.py)};
  }
};

// Ghost key ordered by (owner rank, owner-local index).
struct GhostKey {
  int owner;
  index_t owner_local;
  index_t global;
  friend bool operator<(const GhostKey& a, const GhostKey& b) {
    return a.owner < b.owner || (a.owner == b.owner && a.owner_local < b.owner_local);
  }
  friend bool operator==(const GhostKey& a, const GhostKey& b) {
    return a.owner == b.owner && a.owner_local == b.owner_local;
  }
};

template <class F>
void for_each_neighbor(const Layout& g, index_t gx, index_t gy, index_t gz, F&& f) {
  for (index_t dz = -1; dz <= 1; ++dz) {
    const index_t z = gz + dz;
    if (z < 0 || z >= g.gnz) continue;
    for (index_t dy = -1; dy <= 1; ++dy) {
      const index_t y = gy + dy;
      if (y < 0 || y >= g.gny) continue;
      for (index_t dx = -1; dx <= 1; ++dx) {
        const index_t x = gx + dx;
        if (x < 0 || x >= g.gnx) continue;
        f(x, y, z, dx == 0 && dy == 0 && dz == 0);
      }
    }
  }
}

}  // namespace

void GridSpec::validate() const {
  if (nx < 1 || ny < 1 || nz < 1 || px < 1 || py < 1 || pz < 1)
    throw Error(ErrorCode::InvalidArgument, "grid extents and partition counts must be >= 1");
}

const HaloNeighbor* HaloPlan::find(int rank) const noexcept {
  auto it = std::lower_bound(neighbors.begin(), neighbors.end(), rank,
                             [](const HaloNeighbor& n, int r) { return n.rank < r; });
  if (it == neighbors.end() || it->rank != rank) return nullptr;
  return &*it;
}

index_t PartitionedProblem::global_rows() const noexcept {
  index_t n = 0;
  for (const auto& part : partitions) n += part.local_n;
  return n;
}

PartitionedProblem generate_problem(const GridSpec& spec) {
  spec.validate();
  const Layout g(spec);
  const int nparts = spec.npartitions();
  const index_t local_n = spec.local_points();

  PartitionedProblem prob;
  prob.grid = spec;
  prob.partitions.resize(sz(nparts));

  // Pass 1: ghost keys per partition.
  std::vector<std::vector<GhostKey>> ghosts(sz(nparts));
  for (int r = 0; r < nparts; ++r) {
    const auto c = g.coords(r);
    auto& keys = ghosts[sz(r)];
    for (index_t lz = 0; lz < spec.nz; ++lz)
      for (index_t ly = 0; ly < spec.ny; ++ly)
        for (index_t lx = 0; lx < spec.nx; ++lx) {
          const index_t gx = c[0] * spec.nx + lx;
          const index_t gy = c[1] * spec.ny + ly;
          const index_t gz = c[2] * spec.nz + lz;
          for_each_neighbor(g, gx, gy, gz, [&](index_t x, index_t y, index_t z, bool) {
            const int o = g.owner(x, y, z);
            if (o != r) keys.push_back({o, g.owner_local(x, y, z), g.global_id(x, y, z)});
          });
        }
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  }

  // Pass 2: halo plans, matrices and vectors.
  for (int r = 0; r < nparts; ++r) {
    Partition& part = prob.partitions[sz(r)];
    part.rank = r;
    part.coords = g.coords(r);
    part.local_n = local_n;
    const auto& keys = ghosts[sz(r)];
    part.halo.ghost_count = static_cast<index_t>(keys.size());

    std::unordered_map<index_t, index_t> ghost_slot;
    ghost_slot.reserve(keys.size());
    part.global_ids.resize(sz(local_n) + keys.size());
    for (std::size_t k = 0; k < keys.size(); ++k) {
      const index_t slot = local_n + static_cast<index_t>(k);
      ghost_slot.emplace(keys[k].global, slot);
      part.global_ids[sz(slot)] = keys[k].global;
      if (part.halo.neighbors.empty() || part.halo.neighbors.back().rank != keys[k].owner)
        part.halo.neighbors.push_back({keys[k].owner, {}, {}});
      part.halo.neighbors.back().recv_ghost.push_back(slot);
    }

    std::vector<index_t> offsets(sz(local_n) + 1, 0);
    std::vector<index_t> cols;
    std::vector<value_t> vals;
    cols.reserve(sz(local_n) * 27);
    vals.reserve(sz(local_n) * 27);
    part.b = DenseVector(local_n);
    part.xexact = DenseVector(local_n, 1.0);
    std::vector<std::pair<index_t, value_t>> row;
    const auto c = part.coords;
    for (index_t lz = 0; lz < spec.nz; ++lz)
      for (index_t ly = 0; ly < spec.ny; ++ly)
        for (index_t lx = 0; lx < spec.nx; ++lx) {
          const index_t l = lx + spec.nx * (ly + spec.ny * lz);
          const index_t gx = c[0] * spec.nx + lx;
          const index_t gy = c[1] * spec.ny + ly;
          const index_t gz = c[2] * spec.nz + lz;
          part.global_ids[sz(l)] = g.global_id(gx, gy, gz);
          row.clear();
          for_each_neighbor(g, gx, gy, gz, [&](index_t x, index_t y, index_t z, bool center) {
            const index_t col = g.owner(x, y, z) == r ? g.owner_local(x, y, z)
                                                      : ghost_slot.at(g.global_id(x, y, z));
            row.emplace_back(col, center ? kStencilDiagonal : kStencilOffDiagonal);
          });
          std::sort(row.begin(), row.end());
          value_t sum = 0.0;
          for (const auto& [col, v] : row) {
            cols.push_back(col);
            vals.push_back(v);
            sum += v;
          }
          part.b[l] = sum;
          offsets[sz(l) + 1] = static_cast<index_t>(cols.size());
        }
    part.a_full = CsrMatrix(local_n, local_n + part.halo.ghost_count, std::move(offsets),
                            std::move(cols), std::move(vals));
  }

  // Send lists mirror the receivers' ghost ordering.
  for (int q = 0; q < nparts; ++q) {
    for (const GhostKey& key : ghosts[sz(q)]) {
      auto& sender = prob.partitions[sz(key.owner)].halo;
      auto it = std::lower_bound(sender.neighbors.begin(), sender.neighbors.end(), q,
                                 [](const HaloNeighbor& n, int r) { return n.rank < r; });
      if (it == sender.neighbors.end() || it->rank != q) it = sender.neighbors.insert(it, {q, {}, {}});
      it->send_local.push_back(key.owner_local);
    }
  }
  return prob;
}

SplitMatrix split_local_remote(const PartitionedProblem& p, int partition) {
  if (partition < 0 || partition >= p.npartitions())
    throw Error(ErrorCode::InvalidArgument, "partition " + std::to_string(partition));
  const Partition& part = p.partitions[sz(partition)];
  const CsrMatrix& a = part.a_full;
  const index_t n = part.local_n;
  auto off = a.row_offsets();
  auto col = a.col_indices();
  auto val = a.values();

  std::vector<index_t> loff(sz(n) + 1, 0), roff(sz(n) + 1, 0);
  std::vector<index_t> lcol, rcol;
  std::vector<value_t> lval, rval;
  lcol.reserve(sz(a.nnz()));
  lval.reserve(sz(a.nnz()));
  for (index_t i = 0; i < n; ++i) {
    for (index_t k = off[i]; k < off[i + 1]; ++k) {
      if (col[k] < n) {
        lcol.push_back(col[k]);
        lval.push_back(val[k]);
      } else {
        rcol.push_back(col[k] - n);
        rval.push_back(val[k]);
      }
    }
    loff[sz(i) + 1] = static_cast<index_t>(lcol.size());
    roff[sz(i) + 1] = static_cast<index_t>(rcol.size());
  }
  return {DynamicMatrix(CsrMatrix(n, n, std::move(loff), std::move(lcol), std::move(lval))),
          DynamicMatrix(CsrMatrix(n, part.halo.ghost_count, std::move(roff), std::move(rcol),
                                  std::move(rval)))};
}

std::vector<SplitMatrix> split_all(const PartitionedProblem& p) {
  std::vector<SplitMatrix> out;
  out.reserve(sz(p.npartitions()));
  for (int r = 0; r < p.npartitions(); ++r) out.push_back(split_local_remote(p, r));
  return out;
}

PartitionVectors make_vectors(const PartitionedProblem& p, value_t fill) {
  PartitionVectors v;
  v.reserve(p.partitions.size());
  for (const auto& part : p.partitions) v.emplace_back(part.local_n + part.halo.ghost_count, fill);
  return v;
}

PartitionVectors scatter_owned(const PartitionedProblem& p, std::span<const value_t> global) {
  if (static_cast<index_t>(global.size()) != p.global_rows())
    throw Error(ErrorCode::DimensionMismatch, "global vector length");
  PartitionVectors v = make_vectors(p);
  for (std::size_t r = 0; r < p.partitions.size(); ++r) {
    const auto& part = p.partitions[r];
    for (index_t l = 0; l < part.local_n; ++l) v[r][l] = global[sz(part.global_ids[sz(l)])];
  }
  return v;
}

DenseVector gather_owned(const PartitionedProblem& p, const PartitionVectors& x) {
  DenseVector out(p.global_rows());
  for (std::size_t r = 0; r < p.partitions.size(); ++r) {
    const auto& part = p.partitions[r];
    for (index_t l = 0; l < part.local_n; ++l) out[part.global_ids[sz(l)]] = x[r][l];
  }
  return out;
}

void exchange_halo(const PartitionedProblem& p, PartitionVectors& x) {
  if (static_cast<int>(x.size()) != p.npartitions())
    throw Error(ErrorCode::DimensionMismatch, "one vector per partition required");
  for (std::size_t r = 0; r < p.partitions.size(); ++r) {
    const auto& part = p.partitions[r];
    if (x[r].size() != part.local_n + part.halo.ghost_count)
      throw Error(ErrorCode::DimensionMismatch,
                  "partition " + std::to_string(r) + " vector must hold owned and ghost entries");
  }
  // Ghost writes only read owned entries, so the order of partitions is free.
  for (std::size_t q = 0; q < p.partitions.size(); ++q) {
    for (const HaloNeighbor& from : p.partitions[q].halo.neighbors) {
      const HaloNeighbor* to_me = p.partitions[sz(from.rank)].halo.find(static_cast<int>(q));
      const DenseVector& src = x[sz(from.rank)];
      DenseVector& dst = x[q];
      for (std::size_t k = 0; k < from.recv_ghost.size(); ++k)
        dst[from.recv_ghost[k]] = src[to_me->send_local[k]];
    }
  }
}

void distributed_spmv(const ExecBackend& backend, const PartitionedProblem& p,
                      std::span<const SplitMatrix> splits, PartitionVectors& x,
                      PartitionVectors& y, SpmvTimings* timings) {
  using clock = std::chrono::steady_clock;
  const auto nparts = sz(p.npartitions());
  if (splits.size() != nparts || y.size() != nparts)
    throw Error(ErrorCode::DimensionMismatch, "one split matrix and vector per partition required");
  if (timings && timings->partition_seconds.size() != nparts)
    timings->partition_seconds.assign(nparts, 0.0);

  const auto t0 = clock::now();
  exchange_halo(p, x);
  if (timings) timings->exchange_seconds += std::chrono::duration<double>(clock::now() - t0).count();

  for (std::size_t r = 0; r < nparts; ++r) {
    const index_t n = p.partitions[r].local_n;
    if (y[r].size() != n && y[r].size() != x[r].size())
      throw Error(ErrorCode::DimensionMismatch, "partition " + std::to_string(r) + " output length");
    const auto start = clock::now();
    std::span<const value_t> xs = x[r].span();
    std::span<value_t> ys = y[r].span().first(sz(n));
    spmv(backend, splits[r].local, xs.first(sz(n)), ys);
    spmv_add(backend, splits[r].remote, xs.subspan(sz(n)), ys);
    if (timings)
      timings->partition_seconds[r] += std::chrono::duration<double>(clock::now() - start).count();
  }
}

}  // namespace dynsparse
