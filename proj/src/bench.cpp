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

#include "dynsparse/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "dynsparse/solver.hpp"

namespace dynsparse {

using json = nlohmann::json;

namespace {

using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point t0) {
  return std::chrono::duration<double>(clock_type::now() - t0).count();
}

std::string_view backend_name(ExecBackend::Kind k) {
  return k == ExecBackend::Kind::Serial ? "serial" : "threaded";
}

ExecBackend::Kind parse_backend(std::string_view s) {
  if (s == "serial") return ExecBackend::Kind::Serial;
  if (s == "threaded") return ExecBackend::Kind::Threaded;
  throw Error(ErrorCode::InvalidArgument, "unknown backend '" + std::string(s) + "'");
}

void check_config(const BenchConfig& c) {
  if (c.nx < 1 || c.ny < 1 || c.nz < 1 || c.px < 1 || c.py < 1 || c.pz < 1)
    throw Error(ErrorCode::InvalidArgument, "grid extents and partition counts must be >= 1");
  if (c.iters < 1) throw Error(ErrorCode::InvalidArgument, "iters must be >= 1");
  if (c.reps < 1) throw Error(ErrorCode::InvalidArgument, "reps must be >= 1");
  if (c.threads < 1) throw Error(ErrorCode::InvalidArgument, "threads must be >= 1");
  if (!(c.cg_tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "cg tolerance must be > 0");
  if (c.cg_max_iters < 0) throw Error(ErrorCode::InvalidArgument, "cg max iterations must be >= 0");
}

double timed_spmv_loop(const ExecBackend& backend, const PartitionedProblem& p,
                       std::span<const SplitMatrix> splits, index_t iters, SpmvTimings& t) {
  PartitionVectors x = make_vectors(p, 1.0);
  PartitionVectors y = make_vectors(p);
  const auto t0 = clock_type::now();
  for (index_t k = 0; k < iters; ++k) distributed_spmv(backend, p, splits, x, y, &t);
  return seconds_since(t0);
}

}  // namespace

ExecBackend BenchConfig::exec_backend() const {
  return backend == ExecBackend::Kind::Serial ? ExecBackend::serial()
                                              : ExecBackend::threaded(threads);
}

std::string_view validation_status_name(ValidationStatus s) noexcept {
  switch (s) {
    case ValidationStatus::NotRun: return "not_run";
    case ValidationStatus::Passed: return "passed";
    case ValidationStatus::Failed: return "failed";
  }
  return "unknown";
}

ValidationStatus parse_validation_status(std::string_view s) {
  if (s == "not_run") return ValidationStatus::NotRun;
  if (s == "passed") return ValidationStatus::Passed;
  if (s == "failed") return ValidationStatus::Failed;
  throw Error(ErrorCode::ParseError, "unknown validation status '" + std::string(s) + "'");
}

RunReport run_benchmark(const BenchConfig& config) {
  check_config(config);
  const ExecBackend backend = config.exec_backend();
  const ConvertOptions opts{config.dia_fill_limit};

  RunReport rep;
  rep.config = config;

  // 1. Problem setup.
  auto t0 = clock_type::now();
  const PartitionedProblem problem =
      generate_problem({config.nx, config.ny, config.nz, config.px, config.py, config.pz});
  std::vector<SplitMatrix> splits = split_all(problem);
  rep.setup = seconds_since(t0);
  rep.phases.push_back("setup");

  for (int r = 0; r < problem.npartitions(); ++r) {
    const auto& part = problem.partitions[static_cast<std::size_t>(r)];
    PartitionReport pr;
    pr.partition = r;
    pr.local_n = part.local_n;
    pr.ghost_count = part.halo.ghost_count;
    pr.local_nnz = splits[static_cast<std::size_t>(r)].local.nnz();
    pr.remote_nnz = splits[static_cast<std::size_t>(r)].remote.nnz();
    pr.remote_empty = pr.ghost_count == 0 && pr.remote_nnz == 0;
    if (pr.remote_empty) rep.notes.push_back("partition " + std::to_string(r) + ": remote part empty");
    rep.partitions.push_back(pr);
  }

  // 2. Reference timing, everything in CSR.
  SpmvTimings ref_t;
  rep.reference_spmv_time = timed_spmv_loop(backend, problem, splits, config.iters, ref_t);
  for (auto& pr : rep.partitions)
    pr.reference_spmv_time = ref_t.partition_seconds[static_cast<std::size_t>(pr.partition)];
  rep.phases.push_back("reference_timing");

  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<value_t> dist(-1.0, 1.0);
  std::vector<value_t> xg(static_cast<std::size_t>(problem.global_rows()));
  for (auto& v : xg) v = dist(rng);
  PartitionVectors xr = scatter_owned(problem, xg);
  PartitionVectors yref = make_vectors(problem);
  distributed_spmv(backend, problem, splits, xr, yref);

  // 3. Optimization setup.
  rep.phases.push_back("optimization_setup");
  FormatPlan plan(static_cast<std::size_t>(problem.npartitions()),
                  FormatCombo{config.local_format, config.remote_format});
  try {
    if (config.tune) {
      TimingTable table;
      if (config.table_input) {
        std::ifstream in(*config.table_input);
        if (!in) throw Error(ErrorCode::IoError, "cannot open " + *config.table_input);
        table = read_timing_table_csv(in);
      } else {
        table = profile_formats(backend, problem, splits, config.reps, opts);
      }
      if (config.table_output) {
        std::ofstream out(*config.table_output);
        if (!out) throw Error(ErrorCode::IoError, "cannot open " + *config.table_output);
        write_timing_table_csv(out, table);
      }
      for (const FormatCombo c : table.skipped)
        rep.notes.push_back("tuner skipped (" + std::string(format_name(c.local)) + ", " +
                            std::string(format_name(c.remote)) + ")");
      plan = select_plan(table, config.mode);
      if (static_cast<int>(plan.size()) != problem.npartitions())
        throw Error(ErrorCode::InvalidArgument, "timing table partition count does not match the run");
    }
    for (auto& pr : rep.partitions) {
      pr.local_format = plan[static_cast<std::size_t>(pr.partition)].local;
      pr.remote_format = plan[static_cast<std::size_t>(pr.partition)].remote;
    }
    apply_plan(splits, plan, opts);
  } catch (const Error& e) {
    rep.error = e.what();
    return rep;
  }

  // 4. Verification and validation.
  PartitionVectors yopt = make_vectors(problem);
  distributed_spmv(backend, problem, splits, xr, yopt);
  double diff = 0.0, scale = 0.0;
  for (std::size_t r = 0; r < yopt.size(); ++r)
    for (index_t i = 0; i < problem.partitions[r].local_n; ++i) {
      diff = std::max(diff, std::abs(yopt[r][i] - yref[r][i]));
      scale = std::max(scale, std::abs(yref[r][i]));
    }
  rep.verification_max_rel_diff = scale > 0.0 ? diff / scale : diff;
  rep.phases.push_back("verification");

  const ValidationReport vr = validate_solver(backend, problem, splits);
  rep.validation = vr.passed ? ValidationStatus::Passed : ValidationStatus::Failed;
  rep.validation_iterations = vr.iterations;
  rep.phases.push_back("validation");
  if (!vr.passed) return rep;

  // 5. Optimized timing, same loop and inputs as the reference.
  SpmvTimings opt_t;
  rep.optimized_spmv_time = timed_spmv_loop(backend, problem, splits, config.iters, opt_t);
  for (auto& pr : rep.partitions)
    pr.optimized_spmv_time = opt_t.partition_seconds[static_cast<std::size_t>(pr.partition)];
  rep.ratio = *rep.reference_spmv_time / *rep.optimized_spmv_time;
  rep.phases.push_back("optimized_timing");

  if (config.cg_max_iters > 0) {
    PartitionVectors b;
    for (const auto& part : problem.partitions) b.push_back(part.b);
    t0 = clock_type::now();
    const CgResult res = cg(backend, problem, splits, b, make_vectors(problem),
                            CgOptions{config.cg_tol, config.cg_max_iters});
    rep.cg_time = seconds_since(t0);
    rep.cg_iterations = res.iterations;
    rep.cg_converged = res.converged;
    rep.cg_relative_residual = res.residual_history.back();
    rep.phases.push_back("cg");
  }
  return rep;
}

int exit_code(const RunReport& r) noexcept {
  if (r.error) return 3;
  if (r.validation == ValidationStatus::Failed) return 2;
  return 0;
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

namespace {

template <class T>
json opt(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

template <class T>
std::optional<T> get_opt(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<T>();
}

json config_json(const BenchConfig& c) {
  return {{"nx", c.nx},
          {"ny", c.ny},
          {"nz", c.nz},
          {"px", c.px},
          {"py", c.py},
          {"pz", c.pz},
          {"mode", plan_mode_name(c.mode)},
          {"local_format", format_name(c.local_format)},
          {"remote_format", format_name(c.remote_format)},
          {"iters", c.iters},
          {"reps", c.reps},
          {"tune", c.tune},
          {"backend", backend_name(c.backend)},
          {"threads", c.threads},
          {"cg_tol", c.cg_tol},
          {"cg_max_iters", c.cg_max_iters},
          {"seed", c.seed},
          {"dia_fill_limit", opt(c.dia_fill_limit)},
          {"table_input", opt(c.table_input)},
          {"table_output", opt(c.table_output)}};
}

BenchConfig config_from_json(const json& j) {
  BenchConfig c;
  c.nx = j.at("nx").get<index_t>();
  c.ny = j.at("ny").get<index_t>();
  c.nz = j.at("nz").get<index_t>();
  c.px = j.at("px").get<int>();
  c.py = j.at("py").get<int>();
  c.pz = j.at("pz").get<int>();
  c.mode = parse_plan_mode(j.at("mode").get<std::string>());
  c.local_format = parse_format(j.at("local_format").get<std::string>());
  c.remote_format = parse_format(j.at("remote_format").get<std::string>());
  c.iters = j.at("iters").get<index_t>();
  c.reps = j.at("reps").get<int>();
  c.tune = j.at("tune").get<bool>();
  c.backend = parse_backend(j.at("backend").get<std::string>());
  c.threads = j.at("threads").get<int>();
  c.cg_tol = j.at("cg_tol").get<value_t>();
  c.cg_max_iters = j.at("cg_max_iters").get<index_t>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.dia_fill_limit = get_opt<index_t>(j, "dia_fill_limit");
  c.table_input = get_opt<std::string>(j, "table_input");
  c.table_output = get_opt<std::string>(j, "table_output");
  return c;
}

}  // namespace

std::string report_to_json(const RunReport& r) {
  json parts = json::array();
  for (const auto& p : r.partitions) {
    parts.push_back({{"partition", p.partition},
                     {"local_format", format_name(p.local_format)},
                     {"remote_format", format_name(p.remote_format)},
                     {"local_n", p.local_n},
                     {"ghost_count", p.ghost_count},
                     {"local_nnz", p.local_nnz},
                     {"remote_nnz", p.remote_nnz},
                     {"remote_empty", p.remote_empty},
                     {"reference_spmv_time", p.reference_spmv_time},
                     {"optimized_spmv_time", opt(p.optimized_spmv_time)}});
  }
  const json j = {
      {"config", config_json(r.config)},
      {"setup", opt(r.setup)},
      {"reference_spmv_time", opt(r.reference_spmv_time)},
      {"optimized_spmv_time", opt(r.optimized_spmv_time)},
      {"cg_time", opt(r.cg_time)},
      {"ratio", opt(r.ratio)},
      {"validation",
       {{"status", validation_status_name(r.validation)},
        {"iterations", opt(r.validation_iterations)}}},
      {"verification_max_rel_diff", opt(r.verification_max_rel_diff)},
      {"cg",
       {{"iterations", opt(r.cg_iterations)},
        {"converged", opt(r.cg_converged)},
        {"relative_residual", opt(r.cg_relative_residual)}}},
      {"partitions", parts},
      {"phases", r.phases},
      {"notes", r.notes},
      {"error", opt(r.error)}};
  return j.dump(2);
}

RunReport report_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  try {
    RunReport r;
    r.config = config_from_json(j.at("config"));
    r.setup = get_opt<double>(j, "setup");
    r.reference_spmv_time = get_opt<double>(j, "reference_spmv_time");
    r.optimized_spmv_time = get_opt<double>(j, "optimized_spmv_time");
    r.cg_time = get_opt<double>(j, "cg_time");
    r.ratio = get_opt<double>(j, "ratio");
    r.validation = parse_validation_status(j.at("validation").at("status").get<std::string>());
    r.validation_iterations = get_opt<index_t>(j.at("validation"), "iterations");
    r.verification_max_rel_diff = get_opt<double>(j, "verification_max_rel_diff");
    r.cg_iterations = get_opt<index_t>(j.at("cg"), "iterations");
    r.cg_converged = get_opt<bool>(j.at("cg"), "converged");
    r.cg_relative_residual = get_opt<double>(j.at("cg"), "relative_residual");
    for (const auto& p : j.at("partitions")) {
      PartitionReport pr;
      pr.partition = p.at("partition").get<int>();
      pr.local_format = parse_format(p.at("local_format").get<std::string>());
      pr.remote_format = parse_format(p.at("remote_format").get<std::string>());
      pr.local_n = p.at("local_n").get<index_t>();
      pr.ghost_count = p.at("ghost_count").get<index_t>();
      pr.local_nnz = p.at("local_nnz").get<index_t>();
      pr.remote_nnz = p.at("remote_nnz").get<index_t>();
      pr.remote_empty = p.at("remote_empty").get<bool>();
      pr.reference_spmv_time = p.at("reference_spmv_time").get<double>();
      pr.optimized_spmv_time = get_opt<double>(p, "optimized_spmv_time");
      r.partitions.push_back(pr);
    }
    r.phases = j.at("phases").get<std::vector<std::string>>();
    r.notes = j.at("notes").get<std::vector<std::string>>();
    r.error = get_opt<std::string>(j, "error");
    return r;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

namespace {

const std::vector<std::string>& csv_columns() {
  static const std::vector<std::string> cols = {
      "nx", "ny", "nz", "px", "py", "pz", "mode", "config_local_format", "config_remote_format",
      "iters", "reps", "tune", "backend", "threads", "cg_tol", "cg_max_iters", "seed",
      "dia_fill_limit", "table_input", "table_output", "setup", "reference_spmv_time",
      "optimized_spmv_time", "cg_time", "ratio", "validation_status", "validation_iterations",
      "verification_max_rel_diff", "cg_iterations", "cg_converged", "cg_relative_residual",
      "phases", "notes", "error", "partition", "local_format", "remote_format", "local_n", "ghost_count",
      "local_nnz", "remote_nnz", "remote_empty", "partition_reference_spmv_time",
      "partition_optimized_spmv_time"};
  return cols;
}

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}
std::string num(index_t v) { return std::to_string(v); }
std::string num(int v) { return std::to_string(v); }
std::string num(std::uint64_t v) { return std::to_string(v); }
std::string num(bool v) { return v ? "true" : "false"; }
std::string num(const std::string& v) { return v; }

template <class T>
std::string cell(const std::optional<T>& v) {
  return v ? num(*v) : std::string();
}

std::string quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + '"';
}

std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false, any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char ch = text[i];
    any = true;
    if (quoted) {
      if (ch == '"' && i + 1 < text.size() && text[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        field += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      row.push_back(std::move(field));
      field.clear();
    } else if (ch == '\n') {
      row.push_back(std::move(field));
      field.clear();
      rows.push_back(std::move(row));
      row.clear();
      any = false;
    } else if (ch != '\r') {
      field += ch;
    }
  }
  if (any) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

template <class T>
T parse_cell(const std::string& s);

template <>
double parse_cell<double>(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size())
    throw Error(ErrorCode::ParseError, "bad number '" + s + "'");
  return v;
}
template <>
index_t parse_cell<index_t>(const std::string& s) {
  try {
    return static_cast<index_t>(std::stoll(s));
  } catch (const std::exception&) {
    throw Error(ErrorCode::ParseError, "bad integer '" + s + "'");
  }
}
template <>
int parse_cell<int>(const std::string& s) {
  return static_cast<int>(parse_cell<index_t>(s));
}
template <>
std::uint64_t parse_cell<std::uint64_t>(const std::string& s) {
  try {
    return std::stoull(s);
  } catch (const std::exception&) {
    throw Error(ErrorCode::ParseError, "bad integer '" + s + "'");
  }
}
template <>
bool parse_cell<bool>(const std::string& s) {
  if (s == "true") return true;
  if (s == "false") return false;
  throw Error(ErrorCode::ParseError, "bad boolean '" + s + "'");
}
template <>
std::string parse_cell<std::string>(const std::string& s) {
  return s;
}

template <class T>
std::optional<T> parse_opt(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return parse_cell<T>(s);
}

}  // namespace

std::string report_to_csv(const RunReport& r) {
  const BenchConfig& c = r.config;
  const std::vector<std::string> shared = {
      num(c.nx), num(c.ny), num(c.nz), num(c.px), num(c.py), num(c.pz),
      std::string(plan_mode_name(c.mode)), std::string(format_name(c.local_format)),
      std::string(format_name(c.remote_format)), num(c.iters), num(c.reps), num(c.tune),
      std::string(backend_name(c.backend)), num(c.threads), num(c.cg_tol), num(c.cg_max_iters),
      num(c.seed), cell(c.dia_fill_limit), cell(c.table_input), cell(c.table_output),
      cell(r.setup), cell(r.reference_spmv_time), cell(r.optimized_spmv_time), cell(r.cg_time),
      cell(r.ratio), std::string(validation_status_name(r.validation)),
      cell(r.validation_iterations), cell(r.verification_max_rel_diff), cell(r.cg_iterations),
      cell(r.cg_converged), cell(r.cg_relative_residual), json(r.phases).dump(), json(r.notes).dump(),
      cell(r.error)};

  std::ostringstream out;
  const auto& cols = csv_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << '\n';
  for (const auto& p : r.partitions) {
    std::vector<std::string> row = shared;
    for (auto s : {num(p.partition), std::string(format_name(p.local_format)),
                   std::string(format_name(p.remote_format)), num(p.local_n), num(p.ghost_count),
                   num(p.local_nnz), num(p.remote_nnz), num(p.remote_empty),
                   num(p.reference_spmv_time), cell(p.optimized_spmv_time)})
      row.push_back(std::move(s));
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << quote(row[i]);
    out << '\n';
  }
  return out.str();
}

RunReport report_from_csv(std::string_view text) {
  const auto rows = parse_csv(text);
  const auto& cols = csv_columns();
  if (rows.empty() || rows[0] != cols) throw Error(ErrorCode::ParseError, "unexpected CSV header");
  if (rows.size() < 2) throw Error(ErrorCode::ParseError, "report CSV has no partition rows");

  RunReport r;
  for (std::size_t n = 1; n < rows.size(); ++n) {
    const auto& row = rows[n];
    if (row.size() != cols.size())
      throw Error(ErrorCode::ParseError, "row " + std::to_string(n) + " has wrong field count");
    std::size_t i = 0;
    auto next = [&]() -> const std::string& { return row[i++]; };
    BenchConfig c;
    c.nx = parse_cell<index_t>(next());
    c.ny = parse_cell<index_t>(next());
    c.nz = parse_cell<index_t>(next());
    c.px = parse_cell<int>(next());
    c.py = parse_cell<int>(next());
    c.pz = parse_cell<int>(next());
    c.mode = parse_plan_mode(next());
    c.local_format = parse_format(next());
    c.remote_format = parse_format(next());
    c.iters = parse_cell<index_t>(next());
    c.reps = parse_cell<int>(next());
    c.tune = parse_cell<bool>(next());
    c.backend = parse_backend(next());
    c.threads = parse_cell<int>(next());
    c.cg_tol = parse_cell<double>(next());
    c.cg_max_iters = parse_cell<index_t>(next());
    c.seed = parse_cell<std::uint64_t>(next());
    c.dia_fill_limit = parse_opt<index_t>(next());
    c.table_input = parse_opt<std::string>(next());
    c.table_output = parse_opt<std::string>(next());
    RunReport cur;
    cur.config = c;
    cur.setup = parse_opt<double>(next());
    cur.reference_spmv_time = parse_opt<double>(next());
    cur.optimized_spmv_time = parse_opt<double>(next());
    cur.cg_time = parse_opt<double>(next());
    cur.ratio = parse_opt<double>(next());
    cur.validation = parse_validation_status(next());
    cur.validation_iterations = parse_opt<index_t>(next());
    cur.verification_max_rel_diff = parse_opt<double>(next());
    cur.cg_iterations = parse_opt<index_t>(next());
    cur.cg_converged = parse_opt<bool>(next());
    cur.cg_relative_residual = parse_opt<double>(next());
    try {
      cur.phases = json::parse(next()).get<std::vector<std::string>>();
      cur.notes = json::parse(next()).get<std::vector<std::string>>();
    } catch (const json::exception& e) {
      throw Error(ErrorCode::ParseError, e.what());
    }
    cur.error = parse_opt<std::string>(next());
    if (n == 1) {
      r = cur;
    } else {
      RunReport shared = r;
      shared.partitions.clear();
      if (!(cur == shared))
        throw Error(ErrorCode::ParseError, "run columns differ between rows");
    }
    PartitionReport p;
    p.partition = parse_cell<int>(next());
    p.local_format = parse_format(next());
    p.remote_format = parse_format(next());
    p.local_n = parse_cell<index_t>(next());
    p.ghost_count = parse_cell<index_t>(next());
    p.local_nnz = parse_cell<index_t>(next());
    p.remote_nnz = parse_cell<index_t>(next());
    p.remote_empty = parse_cell<bool>(next());
    p.reference_spmv_time = parse_cell<double>(next());
    p.optimized_spmv_time = parse_opt<double>(next());
    r.partitions.push_back(p);
  }
  return r;
}

void emit_report(const RunReport& r, ReportFormat format, const std::filesystem::path& path) {
  const std::string text = format == ReportFormat::Json ? report_to_json(r) + "\n" : report_to_csv(r);
  if (path.empty()) {
    std::cout << text;
    std::cout.flush();
    if (!std::cout) throw Error(ErrorCode::IoError, "write to standard output failed");
    return;
  }
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw Error(ErrorCode::IoError, "write to " + path.string() + " failed");
}

}  // namespace dynsparse
