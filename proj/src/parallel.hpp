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

#include <algorithm>
#include <functional>

#include "dynsparse/kernels.hpp"

namespace dynsparse::detail {

/// Runs task(0) .. task(nchunks - 1) on the shared pool; the calling thread
/// takes part. Blocks until every chunk has finished and rethrows the first
/// exception raised by a chunk.
void run_chunks(int nchunks, const std::function<void(int)>& task);

/// Number of chunks the backend splits n items into.
inline int chunk_count(const ExecBackend& backend, index_t n) {
  if (backend.kind() == ExecBackend::Kind::Serial || n <= 1) return 1;
  return static_cast<int>(std::min<index_t>(backend.nthreads(), n));
}

inline index_t chunk_begin(index_t n, int nchunks, int c) {
  return n * c / nchunks;
}

/// fn(begin, end, chunk) over a static partition of [0, n). The partition is
/// a pure function of (n, chunk_count).
template <class F>
void parallel_for(const ExecBackend& backend, index_t n, F&& fn) {
  const int nchunks = chunk_count(backend, n);
  if (nchunks == 1) {
    fn(index_t{0}, n, 0);
    return;
  }
  run_chunks(nchunks, [&](int c) {
    fn(chunk_begin(n, nchunks, c), chunk_begin(n, nchunks, c + 1), c);
  });
}

}  // namespace dynsparse::detail
