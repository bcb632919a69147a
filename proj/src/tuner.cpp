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

#include "dynsparse/tuner.hpp"

#include <algorithm>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

namespace dynsparse {

namespace {

std::size_t sz(index_t n) { return static_cast<std::size_t>(n); }

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Smallest recordable time; a cell must be strictly positive.
constexpr double kTimerFloor = 1e-9;

}  // namespace

std::vector<FormatCombo> all_combos() {
  std::vector<FormatCombo> out;
  for (FormatId l : kAllFormats)
    for (FormatId r : kAllFormats) out.push_back({l, r});
  return out;
}

PlanMode parse_plan_mode(std::string_view name) {
  if (name == "fixed") return PlanMode::Fixed;
  if (name == "morpheus") return PlanMode::Morpheus;
  if (name == "ghost") return PlanMode::Ghost;
  if (name == "multi") return PlanMode::Multi;
  throw Error(ErrorCode::InvalidArgument, "unknown mode '" + std::string(name) + "'");
}

std::string_view plan_mode_name(PlanMode mode) noexcept {
  switch (mode) {
    case PlanMode::Fixed: return "fixed";
    case PlanMode::Morpheus: return "morpheus";
    case PlanMode::Ghost: return "ghost";
    case PlanMode::Multi: return "multi";
  }
  return "unknown";
}

std::optional<double> TimingTable::get(int partition, FormatCombo c) const {
  auto it = seconds.find({partition, c.local, c.remote});
  if (it == seconds.end()) return std::nullopt;
  return it->second;
}

TimingTable profile_formats(const ExecBackend& backend, const PartitionedProblem& p,
                            std::span<SplitMatrix> splits, int reps, const ConvertOptions& opts) {
  if (reps < 1) throw Error(ErrorCode::InvalidArgument, "reps must be >= 1");
  const auto nparts = static_cast<std::size_t>(p.npartitions());
  if (splits.size() != nparts)
    throw Error(ErrorCode::DimensionMismatch, "one split matrix per partition required");

  // Handles on the original matrices; restoring is a pointer swap.
  const std::vector<SplitMatrix> original(splits.begin(), splits.end());
  auto restore = [&] { std::copy(original.begin(), original.end(), splits.begin()); };

  TimingTable table;
  table.npartitions = p.npartitions();
  table.reps = reps;

  PartitionVectors x = make_vectors(p, 1.0);
  PartitionVectors y = make_vectors(p);

  try {
    for (const FormatCombo combo : all_combos()) {
      restore();
      bool ok = true;
      for (auto& s : splits) {
        try {
          convert_inplace(s.local, combo.local, opts);
          convert_inplace(s.remote, combo.remote, opts);
        } catch (const Error&) {
          ok = false;
          break;
        }
      }
      if (!ok) {
        table.skipped.insert(combo);
        continue;
      }

      distributed_spmv(backend, p, splits, x, y);  // warm-up
      std::vector<std::vector<double>> samples(nparts);
      for (int rep = 0; rep < reps; ++rep) {
        SpmvTimings t;
        distributed_spmv(backend, p, splits, x, y, &t);
        for (std::size_t r = 0; r < nparts; ++r) samples[r].push_back(t.partition_seconds[r]);
      }
      for (std::size_t r = 0; r < nparts; ++r)
        table.set(static_cast<int>(r), combo, std::max(median(samples[r]), kTimerFloor));
    }
  } catch (...) {
    restore();
    throw;
  }
  restore();
  return table;
}

FormatPlan select_plan(const TimingTable& t, PlanMode mode) {
  const int nparts = t.npartitions;
  if (mode == PlanMode::Fixed) return FormatPlan(sz(nparts), FormatCombo{});

  auto cell = [&](int r, FormatCombo c) -> double {
    auto v = t.get(r, c);
    if (!v)
      throw Error(ErrorCode::InvalidArgument,
                  "timing table has no entry for partition " + std::to_string(r) + " (" +
                      std::string(format_name(c.local)) + ", " +
                      std::string(format_name(c.remote)) + ")");
    return *v;
  };

  if (mode == PlanMode::Multi) {
    FormatPlan plan(sz(nparts));
    for (int r = 0; r < nparts; ++r) {
      std::optional<FormatCombo> best;
      double best_time = std::numeric_limits<double>::infinity();
      for (const FormatCombo c : all_combos()) {
        if (t.skipped.count(c)) continue;
        const double s = cell(r, c);
        if (!best || s < best_time) {
          best = c;
          best_time = s;
        }
      }
      if (!best) throw Error(ErrorCode::EmptySearchSpace, "every combination was skipped");
      plan[sz(r)] = *best;
    }
    return plan;
  }

  // Single-format modes: the slowest partition decides.
  std::optional<FormatCombo> best;
  double best_cost = std::numeric_limits<double>::infinity();
  for (FormatId f : kAllFormats) {
    const FormatCombo c = mode == PlanMode::Morpheus ? FormatCombo{f, FormatId::Csr}
                                                     : FormatCombo{FormatId::Csr, f};
    if (t.skipped.count(c)) continue;
    double cost = 0.0;
    for (int r = 0; r < nparts; ++r) cost = std::max(cost, cell(r, c));
    if (!best || cost < best_cost) {
      best = c;
      best_cost = cost;
    }
  }
  if (!best) throw Error(ErrorCode::EmptySearchSpace, "every candidate format was skipped");
  return FormatPlan(sz(nparts), *best);
}

void apply_plan(std::span<SplitMatrix> splits, const FormatPlan& plan, const ConvertOptions& opts) {
  if (plan.size() != splits.size())
    throw Error(ErrorCode::DimensionMismatch, "plan must assign every partition");
  for (std::size_t r = 0; r < splits.size(); ++r) {
    try {
      convert_inplace(splits[r].local, plan[r].local, opts);
      convert_inplace(splits[r].remote, plan[r].remote, opts);
    } catch (const Error& e) {
      throw Error(e.code(),
                  "partition " + std::to_string(r) + " (local=" +
                      std::string(format_name(plan[r].local)) +
                      ", remote=" + std::string(format_name(plan[r].remote)) + "): " + e.message(),
                  static_cast<index_t>(r));
    }
  }
}

void write_timing_table_csv(std::ostream& out, const TimingTable& t) {
  out << "partition,local_format,remote_format,median_seconds,reps\n";
  char buf[64];
  for (int r = 0; r < t.npartitions; ++r) {
    for (const FormatCombo c : all_combos()) {
      out << r << ',' << format_name(c.local) << ',' << format_name(c.remote) << ',';
      if (t.skipped.count(c)) {
        out << "skipped";
      } else if (auto s = t.get(r, c)) {
        std::snprintf(buf, sizeof buf, "%.17g", *s);
        out << buf;
      } else {
        continue;
      }
      out << ',' << t.reps << '\n';
    }
  }
}

TimingTable read_timing_table_csv(std::istream& in) {
  TimingTable t;
  std::string line;
  index_t lineno = 0;
  auto fail = [&](const std::string& what) -> Error {
    return Error(ErrorCode::ParseError, "timing table line " + std::to_string(lineno) + ": " + what,
                 lineno);
  };
  if (!std::getline(in, line)) throw fail("empty input");
  ++lineno;
  if (line != "partition,local_format,remote_format,median_seconds,reps")
    throw fail("unexpected header");
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string tok; std::getline(ss, tok, ',');) f.push_back(tok);
    if (f.size() != 5) throw fail("expected 5 fields");
    int part = 0, reps = 0;
    FormatCombo c;
    try {
      part = std::stoi(f[0]);
      reps = std::stoi(f[4]);
      c = {parse_format(f[1]), parse_format(f[2])};
    } catch (const std::exception& e) {
      throw fail(e.what());
    }
    if (part < 0) throw fail("negative partition");
    t.npartitions = std::max(t.npartitions, part + 1);
    t.reps = reps;
    if (f[3] == "skipped") {
      t.skipped.insert(c);
      continue;
    }
    char* end = nullptr;
    const double s = std::strtod(f[3].c_str(), &end);
    if (end != f[3].c_str() + f[3].size() || !(s > 0.0)) throw fail("bad median_seconds");
    t.set(part, c, s);
  }
  return t;
}

}  // namespace dynsparse
