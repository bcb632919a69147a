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

#include "dynsparse/solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace dynsparse {

namespace {

std::size_t sz(index_t n) { return static_cast<std::size_t>(n); }

// Vector space over a single matrix.
template <class M>
struct MatrixSpace {
  using Vec = DenseVector;
  const ExecBackend& backend;
  const M& a;

  Vec zeros() const { return Vec(a.nrows()); }
  void apply(Vec& in, Vec& out) const { spmv(backend, a, in, out); }
  value_t dot(const Vec& u, const Vec& v) const { return dynsparse::dot(backend, u, v); }
  void waxpby(value_t alpha, const Vec& u, value_t beta, const Vec& v, Vec& w) const {
    dynsparse::waxpby(backend, alpha, u, beta, v, w);
  }
  std::vector<DenseVector> owned(const Vec& v) const { return {v}; }
};

// Vector space over a partitioned system; vectors carry ghost slots, and
// reductions and updates touch owned entries only.
struct SplitSpace {
  using Vec = PartitionVectors;
  const ExecBackend& backend;
  const PartitionedProblem& p;
  std::span<const SplitMatrix> splits;

  Vec zeros() const { return make_vectors(p); }
  void apply(Vec& in, Vec& out) const { distributed_spmv(backend, p, splits, in, out); }

  std::span<const value_t> own(const DenseVector& v, std::size_t r) const {
    return v.span().first(sz(p.partitions[r].local_n));
  }
  std::span<value_t> own(DenseVector& v, std::size_t r) const {
    return v.span().first(sz(p.partitions[r].local_n));
  }

  value_t dot(const Vec& u, const Vec& v) const {
    value_t total = 0.0;
    for (std::size_t r = 0; r < u.size(); ++r) total += dynsparse::dot(backend, own(u[r], r), own(v[r], r));
    return total;
  }
  void waxpby(value_t alpha, const Vec& u, value_t beta, const Vec& v, Vec& w) const {
    for (std::size_t r = 0; r < u.size(); ++r)
      dynsparse::waxpby(backend, alpha, own(u[r], r), beta, own(v[r], r), own(w[r], r));
  }
  std::vector<DenseVector> owned(const Vec& v) const {
    std::vector<DenseVector> out;
    for (std::size_t r = 0; r < v.size(); ++r) {
      auto s = own(v[r], r);
      out.emplace_back(std::vector<value_t>(s.begin(), s.end()));
    }
    return out;
  }
};

template <class Space>
CgResult run_cg(const Space& s, const typename Space::Vec& b, typename Space::Vec x,
                const CgOptions& opts) {
  if (!(opts.tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "cg tolerance must be > 0");
  if (opts.max_iters < 0) throw Error(ErrorCode::InvalidArgument, "cg max_iters must be >= 0");

  auto r = s.zeros();
  auto p = s.zeros();
  auto ap = s.zeros();

  s.apply(x, ap);
  s.waxpby(1.0, b, -1.0, ap, r);
  const value_t normb = std::sqrt(s.dot(b, b));
  const value_t scale = normb > 0.0 ? normb : 1.0;

  CgResult res;
  value_t rr = s.dot(r, r);
  res.residual_history.push_back(std::sqrt(rr) / scale);
  res.converged = res.residual_history.back() <= opts.tol;

  s.waxpby(1.0, r, 0.0, r, p);
  while (!res.converged && res.iterations < opts.max_iters) {
    s.apply(p, ap);
    const value_t curvature = s.dot(p, ap);
    if (!(curvature > 0.0))
      throw Error(ErrorCode::BreakdownZeroCurvature,
                  "p^T A p = " + std::to_string(curvature) + " at iteration " +
                      std::to_string(res.iterations + 1),
                  res.iterations + 1);
    const value_t alpha = rr / curvature;
    s.waxpby(1.0, x, alpha, p, x);
    s.waxpby(1.0, r, -alpha, ap, r);
    const value_t rr_next = s.dot(r, r);
    ++res.iterations;
    res.residual_history.push_back(std::sqrt(rr_next) / scale);
    res.converged = res.residual_history.back() <= opts.tol;
    if (res.converged) break;
    const value_t beta = rr_next / rr;
    rr = rr_next;
    s.waxpby(1.0, r, beta, p, p);
  }
  res.x = s.owned(x);
  return res;
}

template <class M>
CgResult cg_matrix(const ExecBackend& backend, const M& a, std::span<const value_t> b,
                   std::span<const value_t> x0, const CgOptions& opts) {
  if (a.nrows() != a.ncols())
    throw Error(ErrorCode::DimensionMismatch, "cg needs a square matrix");
  if (static_cast<index_t>(b.size()) != a.nrows() || static_cast<index_t>(x0.size()) != a.nrows())
    throw Error(ErrorCode::DimensionMismatch, "cg right-hand side or initial guess length");
  MatrixSpace<M> space{backend, a};
  return run_cg(space, DenseVector(std::vector<value_t>(b.begin(), b.end())),
                DenseVector(std::vector<value_t>(x0.begin(), x0.end())), opts);
}

// Copies owned entries of `in` into a full-length vector set.
PartitionVectors widen(const PartitionedProblem& p, const PartitionVectors& in, const char* what) {
  if (static_cast<int>(in.size()) != p.npartitions())
    throw Error(ErrorCode::DimensionMismatch, std::string(what) + ": one vector per partition required");
  PartitionVectors out = make_vectors(p);
  for (std::size_t r = 0; r < in.size(); ++r) {
    const auto& part = p.partitions[r];
    if (in[r].size() != part.local_n && in[r].size() != part.local_n + part.halo.ghost_count)
      throw Error(ErrorCode::DimensionMismatch,
                  std::string(what) + ": wrong length for partition " + std::to_string(r));
    std::copy_n(in[r].begin(), part.local_n, out[r].begin());
  }
  return out;
}

}  // namespace

CgResult cg(const ExecBackend& be, const CooMatrix& a, std::span<const value_t> b,
            std::span<const value_t> x0, const CgOptions& opts) {
  return cg_matrix(be, a, b, x0, opts);
}
CgResult cg(const ExecBackend& be, const CsrMatrix& a, std::span<const value_t> b,
            std::span<const value_t> x0, const CgOptions& opts) {
  return cg_matrix(be, a, b, x0, opts);
}
CgResult cg(const ExecBackend& be, const DiaMatrix& a, std::span<const value_t> b,
            std::span<const value_t> x0, const CgOptions& opts) {
  return cg_matrix(be, a, b, x0, opts);
}
CgResult cg(const ExecBackend& be, const DynamicMatrix& a, std::span<const value_t> b,
            std::span<const value_t> x0, const CgOptions& opts) {
  return cg_matrix(be, a, b, x0, opts);
}

CgResult cg(const ExecBackend& backend, const PartitionedProblem& p,
            std::span<const SplitMatrix> splits, const PartitionVectors& b,
            const PartitionVectors& x0, const CgOptions& opts) {
  if (static_cast<int>(splits.size()) != p.npartitions())
    throw Error(ErrorCode::DimensionMismatch, "one split matrix per partition required");
  SplitSpace space{backend, p, splits};
  return run_cg(space, widen(p, b, "right-hand side"), widen(p, x0, "initial guess"), opts);
}

void ValidationReport::require() const {
  if (!passed)
    throw Error(ErrorCode::ValidationFailed,
                "solver took " + std::to_string(iterations) + " iterations (bound " +
                    std::to_string(kValidationIterationBound) + "), converged=" +
                    (converged ? "true" : "false"));
}

ValidationReport validate_solver(const ExecBackend& backend, const PartitionedProblem& p,
                                 std::span<SplitMatrix> splits) {
  if (static_cast<int>(splits.size()) != p.npartitions())
    throw Error(ErrorCode::DimensionMismatch, "one split matrix per partition required");

  std::vector<DenseVector> saved;
  saved.reserve(splits.size());
  for (const auto& s : splits) saved.push_back(extract_diagonal(s.local));
  auto restore = [&] {
    for (std::size_t r = 0; r < saved.size(); ++r) update_diagonal(splits[r].local, saved[r]);
  };

  ValidationReport report;
  try {
    for (auto& s : splits) {
      const DenseVector big(std::min(s.local.nrows(), s.local.ncols()), kValidationDiagonal);
      update_diagonal(s.local, big);
    }
    PartitionVectors ones = make_vectors(p, 1.0);
    PartitionVectors b = make_vectors(p);
    distributed_spmv(backend, p, splits, ones, b);
    const CgResult res = cg(backend, p, splits, b, make_vectors(p),
                            CgOptions{kValidationTolerance, kValidationMaxIters});
    report.iterations = res.iterations;
    report.converged = res.converged;
    report.final_relative_residual = res.residual_history.back();
    report.passed = res.converged && res.iterations <= kValidationIterationBound;
  } catch (...) {
    restore();
    throw;
  }
  restore();
  return report;
}

}  // namespace dynsparse
