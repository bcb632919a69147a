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

// Acceptance harness: one PASS/FAIL line per criterion, non-zero exit on any
// failure. The CLI path comes from DYNSPARSE_BENCH_EXE.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "dynsparse/bench.hpp"
#include "dynsparse/datamove.hpp"
#include "dynsparse/kernels.hpp"
#include "dynsparse/solver.hpp"
#include "dynsparse/stencil.hpp"
#include "dynsparse/tuner.hpp"
#include "support.hpp"
#include "tuner_support.hpp"

using namespace dynsparse;
namespace ts = testing_support;

namespace {

using Val = std::vector<value_t>;
using Clock = std::chrono::steady_clock;

const ExecBackend kSerial = ExecBackend::serial();

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Collects failure reasons; the first few are printed with the verdict.
struct Outcome {
  std::vector<std::string> failures;
  std::string detail;

  void expect(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
};

template <class M>
Val apply(const ExecBackend& be, const M& a, const Val& x) {
  Val y(static_cast<std::size_t>(a.nrows()), 0.0);
  spmv(be, a, x, y);
  return y;
}

std::string fmt(double v) {
  std::ostringstream s;
  s << v;
  return s.str();
}

// Random COO matrices followed by single-partition stencil matrices.
struct CorpusItem {
  std::string name;
  CooMatrix coo;
  std::vector<Entry> raw;
  ConvertOptions opts;
};

std::vector<CorpusItem> corpus() {
  std::vector<CorpusItem> out;
  std::mt19937_64 rng(20260415);
  std::uniform_int_distribution<index_t> dim(1, 128);
  std::uniform_real_distribution<double> dens(0.01, 0.5);
  for (int k = 0; k < 200; ++k) {
    const index_t nr = dim(rng), nc = dim(rng);
    auto g = ts::random_coo(rng, nr, nc, dens(rng), k % 2 == 0);
    out.push_back({"random #" + std::to_string(k), build_coo(nr, nc, g.rows, g.cols, g.vals),
                   g.entries(), ts::unbounded_fill(nr, nc)});
  }
  for (index_t n : {1, 2, 3, 4, 5, 8, 12, 16}) {
    const auto p = generate_problem({n, n, n, 1, 1, 1});
    const auto& a = p.partitions[0].a_full;
    auto coo = convert_to<CooMatrix>(a);
    out.push_back({"stencil " + std::to_string(n) + "^3", coo, nonzero_entries(a), {}});
  }
  return out;
}

Outcome format_equivalence(const std::vector<CorpusItem>& items) {
  Outcome o;
  std::mt19937_64 rng(7);
  double worst = 0.0;
  for (const auto& it : items) {
    const index_t nr = it.coo.nrows(), nc = it.coo.ncols();
    const Val x = ts::random_vector(rng, nc);
    const Val want = ts::dense_matvec(ts::densify(nr, nc, it.raw), x);
    const auto csr = convert_to<CsrMatrix>(it.coo);
    const auto dia = convert_to<DiaMatrix>(it.coo, it.opts);
    const std::vector<std::pair<std::string, Val>> got = {
        {"coo", apply(kSerial, it.coo, x)},
        {"csr", apply(kSerial, csr, x)},
        {"dia", apply(kSerial, dia, x)},
        {"dynamic coo", apply(kSerial, DynamicMatrix(it.coo), x)},
        {"dynamic csr", apply(kSerial, DynamicMatrix(csr), x)},
        {"dynamic dia", apply(kSerial, DynamicMatrix(dia), x)},
    };
    for (const auto& [name, y] : got) {
      const double e = ts::rel_err(y, want);
      worst = std::max(worst, e);
      o.expect(e <= 1e-13, it.name + " " + name + " rel err " + fmt(e));
    }
  }
  o.detail = std::to_string(items.size()) + " matrices, worst rel err " + fmt(worst);
  return o;
}

Outcome conversion_closure(const std::vector<CorpusItem>& items) {
  Outcome o;
  std::size_t paths = 0;
  for (const auto& it : items) {
    const auto want = ts::map_entries(ts::canonical_map(it.raw));
    for (FormatId f : kAllFormats)
      for (FormatId g : kAllFormats) {
        const DynamicMatrix a = convert(it.coo, f, it.opts);
        const DynamicMatrix b = convert(a, g, it.opts);
        const DynamicMatrix c = convert(b, f, it.opts);
        ++paths;
        o.expect(c.active() == f && c.nrows() == it.coo.nrows() && c.ncols() == it.coo.ncols(),
                 it.name + " shape or format changed");
        o.expect(ts::sorted_entries(c) == want, it.name + " " + std::string(format_name(f)) + "->" +
                                                    std::string(format_name(g)) + "->" +
                                                    std::string(format_name(f)) + " entries differ");
      }
  }
  o.detail = std::to_string(paths) + " round trips";
  return o;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

Outcome dispatch_overhead() {
  Outcome o;
  constexpr int kIters = 500, kReps = 5;
  const auto p = generate_problem({64, 64, 64, 1, 1, 1});
  const CsrMatrix concrete = p.partitions[0].a_full;
  const DynamicMatrix dynamic(concrete);
  std::mt19937_64 rng(3);
  const Val x = ts::random_vector(rng, concrete.ncols());
  Val y(static_cast<std::size_t>(concrete.nrows()));

  auto run = [&](const auto& a) {
    const auto t0 = Clock::now();
    for (int i = 0; i < kIters; ++i) spmv(kSerial, a, x, y);
    return seconds_since(t0);
  };
  run(concrete);
  run(dynamic);
  std::vector<double> ratios;
  for (int r = 0; r < kReps; ++r) {
    double td, tc;
    if (r % 2 == 0) {
      td = run(dynamic);
      tc = run(concrete);
    } else {
      tc = run(concrete);
      td = run(dynamic);
    }
    ratios.push_back(td / tc);
  }
  const double m = median(ratios);
  o.expect(m >= 0.90 && m <= 1.10, "median ratio " + fmt(m) + " outside [0.90, 1.10]");
  o.detail = "median dynamic/concrete ratio " + fmt(m);
  return o;
}

Outcome stencil_structure() {
  Outcome o;
  for (index_t n : {1, 2, 3, 4, 8}) {
    const auto p = generate_problem({n, n, n, 1, 1, 1});
    const auto& a = p.partitions[0].a_full;
    const index_t expect = (3 * n - 2) * (3 * n - 2) * (3 * n - 2);
    const ts::StencilOracle oracle{n, n, n};
    o.expect(a.nnz() == expect, "n=" + std::to_string(n) + " nnz " + std::to_string(a.nnz()));
    o.expect(oracle.total_nnz() == expect, "n=" + std::to_string(n) + " oracle disagrees");
    if (n >= 3) {
      const auto split = split_local_remote(p, 0);
      const auto dia = convert_to<DiaMatrix>(split.local);
      o.expect(dia.ndiags() == 27,
               "n=" + std::to_string(n) + " has " + std::to_string(dia.ndiags()) + " diagonals");
    }
  }
  o.detail = "n in {1,2,3,4,8}";
  return o;
}

Outcome distributed_equivalence() {
  Outcome o;
  constexpr index_t kGlobal = 16;
  const auto single = generate_problem({kGlobal, kGlobal, kGlobal, 1, 1, 1});
  std::mt19937_64 rng(5);
  const Val xg = ts::random_vector(rng, single.global_rows());
  Val want(xg.size());
  {
    const auto& part = single.partitions[0];
    Val xl(xg.size());
    for (index_t i = 0; i < part.local_n; ++i)
      xl[static_cast<std::size_t>(i)] = xg[static_cast<std::size_t>(part.global_ids[static_cast<std::size_t>(i)])];
    const Val yl = apply(kSerial, part.a_full, xl);
    for (index_t i = 0; i < part.local_n; ++i)
      want[static_cast<std::size_t>(part.global_ids[static_cast<std::size_t>(i)])] = yl[static_cast<std::size_t>(i)];
  }

  int compared = 0, skipped = 0;
  double worst = 0.0;
  for (auto [px, py, pz] : {std::array{1, 1, 1}, std::array{2, 1, 1}, std::array{2, 2, 1}, std::array{2, 2, 2}}) {
    const GridSpec g{kGlobal / px, kGlobal / py, kGlobal / pz, px, py, pz};
    const auto p = generate_problem(g);
    const std::string tag = std::to_string(px) + "x" + std::to_string(py) + "x" + std::to_string(pz);
    for (FormatCombo c : all_combos()) {
      auto splits = split_all(p);
      try {
        for (auto& s : splits) {
          convert_inplace(s.local, c.local);
          convert_inplace(s.remote, c.remote);
        }
      } catch (const Error& e) {
        o.expect(e.code() == ErrorCode::DiaFillOverflow, tag + " unexpected conversion error");
        ++skipped;
        continue;
      }
      auto x = scatter_owned(p, xg);
      auto y = make_vectors(p);
      distributed_spmv(kSerial, p, splits, x, y);
      const double e = ts::rel_err(gather_owned(p, y).vector(), want);
      worst = std::max(worst, e);
      ++compared;
      o.expect(e <= 1e-12, tag + " (" + std::string(format_name(c.local)) + ", " +
                               std::string(format_name(c.remote)) + ") rel err " + fmt(e));
    }
  }
  o.expect(compared >= 4 * 6, "too few combinations compared");
  o.detail = std::to_string(compared) + " runs compared, " + std::to_string(skipped) +
             " skipped, worst rel err " + fmt(worst);
  return o;
}

Outcome solver() {
  Outcome o;
  const auto p = generate_problem({16, 16, 16, 1, 1, 1});
  const auto& part = p.partitions[0];
  const Val x0(static_cast<std::size_t>(part.local_n), 0.0);
  const auto r = cg(kSerial, part.a_full, part.b, x0, {1e-9, 500});
  o.expect(r.converged, "cg did not converge");
  const Val& x = r.x.at(0).vector();
  const Val ax = apply(kSerial, part.a_full, x);
  Val res(ax.size());
  for (std::size_t i = 0; i < ax.size(); ++i) res[i] = part.b[static_cast<index_t>(i)] - ax[i];
  const double true_rel = std::sqrt(dot(kSerial, res, res) / dot(kSerial, part.b, part.b));
  double err = 0.0;
  for (double v : x) err = std::max(err, std::abs(v - 1.0));
  o.expect(true_rel <= 1e-8, "true residual " + fmt(true_rel));
  o.expect(err <= 1e-6, "max-norm error " + fmt(err));

  auto splits = split_all(p);
  const auto before = nonzero_entries(splits[0].local);
  const auto diag_before = extract_diagonal(splits[0].local);
  const auto v = validate_solver(kSerial, p, splits);
  o.expect(v.converged && v.passed, "validation did not pass");
  o.expect(v.iterations <= 12, "validation took " + std::to_string(v.iterations) + " iterations");
  o.expect(extract_diagonal(splits[0].local) == diag_before, "diagonal not restored");
  o.expect(nonzero_entries(splits[0].local) == before, "matrix not restored");
  o.detail = std::to_string(r.iterations) + " cg iterations, true residual " + fmt(true_rel) +
             ", max error " + fmt(err) + ", validation in " + std::to_string(v.iterations);
  return o;
}

Outcome tuner() {
  Outcome o;
  constexpr FormatId COO = FormatId::Coo, CSR = FormatId::Csr, DIA = FormatId::Dia;
  using ts::uniform_table;

  auto t = uniform_table(2, 5e-3);
  t.set(0, {DIA, COO}, 1e-3);
  t.set(1, {CSR, CSR}, 1e-3);
  t.set(0, {DIA, CSR}, 2e-3);
  t.set(1, {DIA, CSR}, 4e-3);
  const auto multi = select_plan(t, PlanMode::Multi);
  o.expect(multi == FormatPlan{{DIA, COO}, {CSR, CSR}}, "multi argmin");
  o.expect(select_plan(t, PlanMode::Morpheus) == FormatPlan{{DIA, CSR}, {DIA, CSR}}, "morpheus argmin");
  o.expect(select_plan(t, PlanMode::Fixed) == FormatPlan{{CSR, CSR}, {CSR, CSR}}, "fixed plan");
  t.set(0, {CSR, DIA}, 1e-4);
  t.set(1, {CSR, DIA}, 1e-4);
  o.expect(select_plan(t, PlanMode::Ghost) == FormatPlan{{CSR, DIA}, {CSR, DIA}}, "ghost argmin");
  t.skipped.insert({CSR, DIA});
  t.skipped.insert({DIA, COO});
  o.expect(select_plan(t, PlanMode::Ghost)[0] != FormatCombo{CSR, DIA}, "ghost ignores skip");
  o.expect(select_plan(t, PlanMode::Multi)[0] == FormatCombo{DIA, CSR}, "multi ignores skip");

  const auto flat = uniform_table(3, 1e-3);
  o.expect(select_plan(flat, PlanMode::Multi)[2] == FormatCombo{COO, COO}, "multi tie-break");
  o.expect(select_plan(flat, PlanMode::Morpheus)[0] == FormatCombo{COO, CSR}, "morpheus tie-break");
  o.expect(select_plan(flat, PlanMode::Ghost)[0] == FormatCombo{CSR, COO}, "ghost tie-break");

  std::mt19937_64 rng(100);
  int checked = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto rt = ts::random_table(rng);
    const std::string tag = "table " + std::to_string(trial);
    if (rt.skipped.size() == 9) {
      bool threw = false;
      try {
        select_plan(rt, PlanMode::Multi);
      } catch (const Error& e) {
        threw = e.code() == ErrorCode::EmptySearchSpace;
      }
      o.expect(threw, tag + " empty search space not reported");
      continue;
    }
    ++checked;
    const auto mp = select_plan(rt, PlanMode::Multi);
    double multi_total = 0.0;
    for (int r = 0; r < rt.npartitions; ++r) {
      const auto chosen = mp[static_cast<std::size_t>(r)];
      o.expect(!rt.skipped.count(chosen), tag + " multi chose a skipped combination");
      const double s = *rt.get(r, chosen);
      multi_total += s;
      for (auto c : all_combos()) {
        if (rt.skipped.count(c)) continue;
        const double other = *rt.get(r, c);
        o.expect(s <= other, tag + " multi is not the argmin");
        if (other == s) o.expect(!(c < chosen), tag + " multi tie-break");
      }
    }
    for (auto [mode, local_varies] : {std::pair{PlanMode::Morpheus, true}, std::pair{PlanMode::Ghost, false}}) {
      const auto ref = ts::reference_single(rt, local_varies);
      if (!ref) continue;
      const auto plan = select_plan(rt, mode);
      double single_total = 0.0;
      for (int r = 0; r < rt.npartitions; ++r) {
        o.expect(plan[static_cast<std::size_t>(r)] == *ref, tag + " single-format argmin");
        o.expect(*rt.get(r, mp[static_cast<std::size_t>(r)]) <= *rt.get(r, *ref),
                 tag + " multi dominated on a partition");
        single_total += *rt.get(r, *ref);
      }
      o.expect(multi_total <= single_total, tag + " multi dominated in total");
    }
  }
  o.detail = "hand-built tables plus " + std::to_string(checked) + " random tables";
  return o;
}

// ---------------------------------------------------------------------------
// End-to-end CLI runs.
// ---------------------------------------------------------------------------

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string("\"") + DYNSPARSE_BENCH_EXE + "\" " + args + " > /dev/null";
  const int status = std::system(cmd.c_str());
  if (status == -1 || !WIFEXITED(status)) return -1;
  return WEXITSTATUS(status);
}

RunReport without_timings(RunReport r) {
  r.setup.reset();
  r.reference_spmv_time.reset();
  r.optimized_spmv_time.reset();
  r.cg_time.reset();
  r.ratio.reset();
  for (auto& p : r.partitions) {
    p.reference_spmv_time = 0.0;
    p.optimized_spmv_time.reset();
  }
  return r;
}

Outcome end_to_end() {
  Outcome o;
  const std::vector<std::string> phases = {"setup",      "reference_timing", "optimization_setup", "verification",
                                           "validation", "optimized_timing", "cg"};
  const auto dir = std::filesystem::temp_directory_path() / "dynsparse_acceptance";
  std::filesystem::create_directories(dir);
  const auto table = (dir / "table.csv").string();
  struct Example {
    std::string name, args;
    bool tuned;
  };
  const std::vector<Example> examples = {
      {"csr self-comparison", "--nx 16 --ny 16 --nz 16 --procs 1,1,1 --local-format csr --remote-format csr", false},
      {"dia single partition", "--nx 16 --ny 16 --nz 16 --procs 1,1,1 --local-format dia", false},
      {"multi tuned", "--mode multi --tune --reps 5 --table-output \"" + table + "\"", true},
  };

  for (const auto& ex : examples) {
    const auto json_path = dir / "report.json";
    const auto csv_path = dir / "report.csv";
    const int cj = run_cli(ex.args + " --format json --output \"" + json_path.string() + "\"");
    const int cc = run_cli(ex.args + " --format csv --output \"" + csv_path.string() + "\"");
    o.expect(cj == 0 && cc == 0, ex.name + " exit codes " + std::to_string(cj) + "/" + std::to_string(cc));
    if (cj != 0 || cc != 0) continue;
    try {
      const std::string json_text = slurp(json_path);
      const std::string csv_text = slurp(csv_path);
      const RunReport rj = report_from_json(json_text);
      const RunReport rc = report_from_csv(csv_text);

      o.expect(rj.phases == phases, ex.name + " JSON phase order");
      o.expect(rc.phases == phases, ex.name + " CSV phase order");
      o.expect(rj.validation == ValidationStatus::Passed && !rj.error, ex.name + " run not clean");

      o.expect(report_to_json(rj) + "\n" == json_text, ex.name + " JSON text round trip");
      o.expect(report_from_json(report_to_json(rj)) == rj, ex.name + " JSON field round trip");
      o.expect(report_to_csv(rc) == csv_text, ex.name + " CSV text round trip");
      o.expect(report_from_csv(report_to_csv(rc)) == rc, ex.name + " CSV field round trip");
      o.expect(report_from_csv(report_to_csv(rj)) == rj, ex.name + " JSON report through CSV");
      o.expect(report_from_json(report_to_json(rc)) == rc, ex.name + " CSV report through JSON");

      o.expect(rj.config == rc.config, ex.name + " configs differ between formats");
      if (!ex.tuned) {
        o.expect(without_timings(rj) == without_timings(rc), ex.name + " JSON and CSV runs differ");
      } else {
        std::ifstream in(table);
        const auto plan = select_plan(read_timing_table_csv(in), PlanMode::Multi);
        for (const auto& p : rc.partitions)
          o.expect(FormatCombo{p.local_format, p.remote_format} == plan[static_cast<std::size_t>(p.partition)],
                   ex.name + " partition format not from the timing table");
      }
      if (ex.name == "dia single partition") {
        o.expect(!rj.partitions.empty() && rj.partitions[0].remote_empty, ex.name + " remote part not empty");
        o.expect(std::any_of(rj.notes.begin(), rj.notes.end(),
                             [](const std::string& n) { return n.find("remote part empty") != std::string::npos; }),
                 ex.name + " note missing");
      }
    } catch (const std::exception& e) {
      o.expect(false, ex.name + ": " + e.what());
    }
  }
  std::filesystem::remove_all(dir);
  o.detail = std::to_string(examples.size()) + " examples, JSON and CSV";
  return o;
}

struct Criterion {
  int id;
  std::string title;
  double budget_seconds;  // 0 means unbounded
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  std::vector<CorpusItem> items;
  const std::vector<Criterion> criteria = {
      {1, "format equivalence against the dense oracle", 60.0,
       [&] {
         items = corpus();
         return format_equivalence(items);
       }},
      {2, "conversion closure", 60.0, [&] { return conversion_closure(items); }},
      {3, "dynamic dispatch overhead", 300.0, dispatch_overhead},
      {4, "stencil structure", 0.0, stencil_structure},
      {5, "distributed equivalence", 0.0, distributed_equivalence},
      {6, "conjugate gradient and solver validation", 0.0, solver},
      {7, "tuner plan selection", 0.0, tuner},
      {8, "end-to-end CLI", 0.0, end_to_end},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.failures.push_back(std::string("exception: ") + e.what());
    }
    const double secs = seconds_since(t0);
    if (c.budget_seconds > 0.0 && secs > c.budget_seconds)
      o.failures.push_back("took " + fmt(secs) + " s, budget " + fmt(c.budget_seconds) + " s");
    const bool ok = o.failures.empty();
    failed += !ok;
    std::printf("%s [%d] %s: %s (%.2f s)\n", ok ? "PASS" : "FAIL", c.id, c.title.c_str(), o.detail.c_str(), secs);
    for (std::size_t k = 0; k < o.failures.size() && k < 5; ++k) std::printf("    %s\n", o.failures[k].c_str());
    if (o.failures.size() > 5) std::printf("    ... %zu more\n", o.failures.size() - 5);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
