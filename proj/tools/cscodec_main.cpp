// Copyright 2026 The cscodec Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end for the cscodec shared library. Every subcommand
// writes its primary output plus a <output>.manifest key=value record with
// the fully resolved parameters; `cscodec rerun <manifest>` replays a run.

#include <chrono>
#include <cinttypes>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cscodec/cscodec.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitIo = 2;
constexpr int kExitConvergence = 3;

int exit_code_for(cs_status status) {
  switch (status) {
    case CS_OK: return kExitOk;
    case CS_ERR_IO:
    case CS_ERR_FORMAT: return kExitIo;
    case CS_ERR_CONVERGENCE: return kExitConvergence;
    default: return kExitUsage;
  }
}

[[noreturn]] void fail(cs_status status, const std::string& context) {
  std::cerr << "error: " << context << ": " << cs_status_name(status) << " ("
            << cs_last_error() << ")\n";
  std::exit(exit_code_for(status));
}

void require_ok(cs_status status, const std::string& context) {
  if (status != CS_OK) fail(status, context);
}

std::string format_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// RAII wrappers around the C handles.
template <typename T, void (*Free)(T*)>
struct Handle {
  T* ptr = nullptr;
  Handle() = default;
  explicit Handle(T* p) : ptr(p) {}
  ~Handle() { Free(ptr); }
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  T** out() { return &ptr; }
  T* get() const { return ptr; }
};

using TracesHandle = Handle<cs_traces, cs_traces_free>;
using CompressedHandle = Handle<cs_compressed, cs_compressed_free>;
using RecoveryHandle = Handle<cs_recovery, cs_recovery_free>;
using SweepHandle = Handle<cs_sweep, cs_sweep_free>;
using ReportHandle = Handle<cs_report, cs_report_free>;
using EvaluationHandle = Handle<cs_evaluation, cs_evaluation_free>;

using Clock = std::chrono::steady_clock;

// Flat key=value run record written next to the primary output.
class Manifest {
 public:
  explicit Manifest(std::string command) { set("command", std::move(command)); }

  void set(const std::string& key, std::string value) {
    order_.push_back(key);
    values_[key] = std::move(value);
  }
  void set_double(const std::string& key, double v) { set(key, format_full(v)); }
  void set_u64(const std::string& key, std::uint64_t v) { set(key, std::to_string(v)); }
  void set_int(const std::string& key, long long v) { set(key, std::to_string(v)); }

  void write(const std::string& output_path, double wall_time_s) {
    const std::string path = output_path + ".manifest";
    std::ofstream out(path, std::ios::binary);
    if (!out.is_open()) {
      std::cerr << "error: cannot write manifest '" << path << "'\n";
      std::exit(kExitIo);
    }
    for (const auto& key : order_) out << key << '=' << values_.at(key) << '\n';
    out << "version=" << cs_version() << '\n';
    out << "wall_time_s=" << format_full(wall_time_s) << '\n';
  }

 private:
  std::vector<std::string> order_;
  std::map<std::string, std::string> values_;
};

std::map<std::string, std::string> read_manifest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in.is_open()) {
    std::cerr << "error: cannot read manifest '" << path << "'\n";
    std::exit(kExitIo);
  }
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      std::cerr << "error: malformed manifest line '" << line << "'\n";
      std::exit(kExitIo);
    }
    kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return kv;
}

std::string manifest_get(const std::map<std::string, std::string>& kv,
                         const std::string& key) {
  const auto it = kv.find(key);
  if (it == kv.end()) {
    std::cerr << "error: manifest missing key '" << key << "'\n";
    std::exit(kExitUsage);
  }
  return it->second;
}

// ---------------- option bags ----------------

struct SynthOptions {
  std::string output;
  std::int32_t trips = 100;
  double duration_min_s = 300.0;
  double duration_max_s = 700.0;
  double mean_mps = 17.23;
  double std_mps = 10.83;
  double max_accel = 3.0;
  double smooth_fraction = 0.9;
  std::uint64_t seed = 1;
};

struct CompressOptions {
  std::string input;
  std::string output;
  std::uint32_t n = 200;
  double ratio = -1.0;  // resolved from --ratio or --m
  std::int64_t m = -1;
  std::string mode = "bernoulli";
  std::uint64_t seed = 1;
};

struct SolverOptions {
  std::string solver = "admm_bp";
  double tol = 1e-6;
  std::int32_t max_iterations = 5000;
  double penalty = 1.0;
  bool normalize_columns = false;
  std::int32_t jobs = 1;
};

struct RecoverOptions {
  std::string input;
  std::string output;
  SolverOptions solver;
};

struct EvaluateOptions {
  std::string original;
  std::string recovered;
  std::string output;
};

struct SweepOptions {
  std::string input;
  std::string output;
  std::vector<std::uint32_t> n_list;
  std::vector<double> ratio_list;
  std::vector<std::uint64_t> seeds;
  std::string mode = "bernoulli";
  SolverOptions solver;
};

struct AnalyzeOptions {
  std::string original;
  std::string recovered;
  std::string output;
  std::string by = "time";  // time | accel
  std::int32_t bin_hours = 3;
  double bin_width = 0.1;
};

cs_sampling_mode parse_mode(const std::string& mode) {
  if (mode == "bernoulli") return CS_SAMPLING_BERNOULLI;
  if (mode == "exact_m") return CS_SAMPLING_EXACT_M;
  std::cerr << "error: unknown sampling mode '" << mode << "'\n";
  std::exit(kExitUsage);
}

cs_solver_params make_solver_params(const SolverOptions& opt) {
  cs_solver_params params;
  cs_solver_params_init(&params);
  if (opt.solver == "admm_bp") {
    params.algorithm = CS_SOLVER_ADMM_BP;
  } else if (opt.solver == "linprog_bp") {
    params.algorithm = CS_SOLVER_LINPROG_BP;
  } else {
    std::cerr << "error: unknown solver '" << opt.solver << "'\n";
    std::exit(kExitUsage);
  }
  params.eq_tolerance = opt.tol;
  params.max_iterations = opt.max_iterations;
  params.admm_penalty = opt.penalty;
  params.normalize_columns = opt.normalize_columns ? 1 : 0;
  params.jobs = opt.jobs;
  return params;
}

void add_solver_flags(CLI::App* cmd, SolverOptions* opt) {
  cmd->add_option("--solver", opt->solver, "Solver: admm_bp or linprog_bp")
      ->check(CLI::IsMember({"admm_bp", "linprog_bp"}));
  cmd->add_option("--tol", opt->tol, "Equality-constraint tolerance");
  cmd->add_option("--max-iterations", opt->max_iterations, "Solver iteration cap");
  cmd->add_option("--penalty", opt->penalty, "Initial ADMM penalty");
  cmd->add_flag("--normalize-columns", opt->normalize_columns,
                "Rescale sensing columns to unit norm");
  cmd->add_option("--jobs", opt->jobs, "Worker threads for block recovery");
}

void manifest_solver(Manifest* manifest, const SolverOptions& opt) {
  manifest->set("solver", opt.solver);
  manifest->set_double("tol", opt.tol);
  manifest->set_int("max_iterations", opt.max_iterations);
  manifest->set_double("penalty", opt.penalty);
  manifest->set_int("normalize_columns", opt.normalize_columns ? 1 : 0);
  manifest->set_int("jobs", opt.jobs);
}

SolverOptions solver_from_manifest(const std::map<std::string, std::string>& kv) {
  SolverOptions opt;
  opt.solver = manifest_get(kv, "solver");
  opt.tol = std::stod(manifest_get(kv, "tol"));
  opt.max_iterations = static_cast<std::int32_t>(std::stol(manifest_get(kv, "max_iterations")));
  opt.penalty = std::stod(manifest_get(kv, "penalty"));
  opt.normalize_columns = manifest_get(kv, "normalize_columns") == "1";
  opt.jobs = static_cast<std::int32_t>(std::stol(manifest_get(kv, "jobs")));
  return opt;
}

// ---------------- command implementations ----------------

int run_synth(const SynthOptions& opt) {
  const auto t0 = Clock::now();
  cs_synth_params params;
  cs_synth_params_init(&params);
  params.num_trips = opt.trips;
  params.duration_min_s = opt.duration_min_s;
  params.duration_max_s = opt.duration_max_s;
  params.target_mean_mps = opt.mean_mps;
  params.target_std_mps = opt.std_mps;
  params.max_accel_mps2 = opt.max_accel;
  params.smooth_fraction = opt.smooth_fraction;
  params.seed = opt.seed;

  TracesHandle traces;
  require_ok(cs_traces_synthesize(&params, traces.out()), "synthesize");
  require_ok(cs_traces_save_csv(traces.get(), opt.output.c_str()), "save traces");

  Manifest manifest("synth");
  manifest.set("output", opt.output);
  manifest.set_int("trips", opt.trips);
  manifest.set_double("duration_min_s", opt.duration_min_s);
  manifest.set_double("duration_max_s", opt.duration_max_s);
  manifest.set_double("mean_mps", opt.mean_mps);
  manifest.set_double("std_mps", opt.std_mps);
  manifest.set_double("max_accel_mps2", opt.max_accel);
  manifest.set_double("smooth_fraction", opt.smooth_fraction);
  manifest.set_u64("seed", opt.seed);
  manifest.write(opt.output, std::chrono::duration<double>(Clock::now() - t0).count());

  std::cout << "wrote " << cs_traces_count(traces.get()) << " trips to "
            << opt.output << "\n";
  return kExitOk;
}

int run_compress(const CompressOptions& opt) {
  const auto t0 = Clock::now();
  double ratio = opt.ratio;
  if (opt.m >= 0) {
    if (ratio >= 0.0) {
      std::cerr << "error: --ratio and --m are mutually exclusive\n";
      return kExitUsage;
    }
    ratio = static_cast<double>(opt.m) / static_cast<double>(opt.n);
  }
  if (ratio < 0.0) {
    std::cerr << "error: one of --ratio or --m is required\n";
    return kExitUsage;
  }

  TracesHandle traces;
  require_ok(cs_traces_load_csv(opt.input.c_str(), traces.out()), "load traces");

  cs_compress_params params;
  cs_compress_params_init(&params);
  params.block_length = opt.n;
  params.ratio = ratio;
  params.mode = parse_mode(opt.mode);
  params.seed = opt.seed;

  CompressedHandle compressed;
  require_ok(cs_compress(traces.get(), &params, compressed.out()), "compress");
  require_ok(cs_compressed_save(compressed.get(), opt.output.c_str()),
             "save compressed");

  double realized = 0.0;
  const cs_status frac_status =
      cs_compressed_retained_fraction(compressed.get(), &realized);

  Manifest manifest("compress");
  manifest.set("input", opt.input);
  manifest.set("output", opt.output);
  manifest.set_u64("n", opt.n);
  manifest.set_double("ratio", ratio);
  manifest.set_int("m_nominal", std::llround(ratio * opt.n));
  manifest.set("mode", opt.mode);
  manifest.set_u64("seed", opt.seed);
  manifest.write(opt.output, std::chrono::duration<double>(Clock::now() - t0).count());

  std::cout << "compressed " << cs_traces_count(traces.get()) << " trips (nominal ratio "
            << ratio;
  if (frac_status == CS_OK) std::cout << ", realized " << realized;
  std::cout << ") to " << opt.output << "\n";
  return kExitOk;
}

int run_recover(const RecoverOptions& opt) {
  const auto t0 = Clock::now();
  CompressedHandle compressed;
  require_ok(cs_compressed_load(opt.input.c_str(), compressed.out()),
             "load compressed");

  const cs_solver_params params = make_solver_params(opt.solver);
  RecoveryHandle recovery;
  require_ok(cs_recover(compressed.get(), &params, recovery.out()), "recover");
  require_ok(cs_traces_save_csv(cs_recovery_traces(recovery.get()), opt.output.c_str()),
             "save recovered traces");

  Manifest manifest("recover");
  manifest.set("input", opt.input);
  manifest.set("output", opt.output);
  manifest_solver(&manifest, opt.solver);
  manifest.write(opt.output, std::chrono::duration<double>(Clock::now() - t0).count());

  const size_t failed = cs_recovery_failed_blocks(recovery.get());
  const size_t zero = cs_recovery_zero_retention_blocks(recovery.get());
  std::cout << "recovered " << cs_recovery_total_blocks(recovery.get()) << " blocks ("
            << failed << " failed, " << zero << " zero-retention) to " << opt.output
            << "\n";
  if (failed > 0) {
    for (size_t i = 0; i < failed; ++i) {
      std::cerr << "warning: " << cs_recovery_error(recovery.get(), i) << "\n";
    }
    std::cerr << "error: " << failed
              << " block(s) did not converge; output contains best iterates\n";
    return kExitConvergence;
  }
  return kExitOk;
}

int run_evaluate(const EvaluateOptions& opt) {
  const auto t0 = Clock::now();
  TracesHandle original;
  TracesHandle recovered;
  require_ok(cs_traces_load_csv(opt.original.c_str(), original.out()),
             "load original traces");
  require_ok(cs_traces_load_csv(opt.recovered.c_str(), recovered.out()),
             "load recovered traces");

  EvaluationHandle evaluation;
  require_ok(cs_evaluate(original.get(), recovered.get(), evaluation.out()),
             "evaluate");
  require_ok(cs_evaluation_save_csv(evaluation.get(), opt.output.c_str()),
             "save evaluation CSV");

  Manifest manifest("evaluate");
  manifest.set("original", opt.original);
  manifest.set("recovered", opt.recovered);
  manifest.set("output", opt.output);
  manifest.write(opt.output, std::chrono::duration<double>(Clock::now() - t0).count());

  double rmse = 0.0;
  require_ok(cs_evaluation_global_rmse(evaluation.get(), &rmse), "global rmse");
  std::cout << "global_rmse=" << format_full(rmse) << "\n";
  return kExitOk;
}

int run_sweep(const SweepOptions& opt) {
  const auto t0 = Clock::now();
  if (opt.n_list.empty() || opt.ratio_list.empty() || opt.seeds.empty()) {
    std::cerr << "error: --n-list, --ratio-list and --seeds must be nonempty\n";
    return kExitUsage;
  }
  TracesHandle traces;
  require_ok(cs_traces_load_csv(opt.input.c_str(), traces.out()), "load traces");

  std::vector<std::uint32_t> ns;
  std::vector<std::uint32_t> ms;
  for (const std::uint32_t n : opt.n_list) {
    for (const double ratio : opt.ratio_list) {
      const long long m = std::llround(ratio * n);
      if (m < 1 || m > n) {
        std::cerr << "error: ratio " << ratio << " gives bad m for n=" << n << "\n";
        return kExitUsage;
      }
      ns.push_back(n);
      ms.push_back(static_cast<std::uint32_t>(m));
    }
  }

  const cs_solver_params params = make_solver_params(opt.solver);
  SweepHandle sweep;
  require_ok(cs_sweep_run(traces.get(), ns.data(), ms.data(), ns.size(),
                          opt.seeds.data(), opt.seeds.size(), parse_mode(opt.mode),
                          &params, sweep.out()),
             "sweep");
  require_ok(cs_sweep_save_csv(sweep.get(), opt.output.c_str()), "save sweep CSV");

  Manifest manifest("sweep");
  manifest.set("input", opt.input);
  manifest.set("output", opt.output);
  {
    std::ostringstream n_list, ratio_list, seed_list;
    for (std::size_t i = 0; i < opt.n_list.size(); ++i) {
      if (i) n_list << ';';
      n_list << opt.n_list[i];
    }
    for (std::size_t i = 0; i < opt.ratio_list.size(); ++i) {
      if (i) ratio_list << ';';
      ratio_list << format_full(opt.ratio_list[i]);
    }
    for (std::size_t i = 0; i < opt.seeds.size(); ++i) {
      if (i) seed_list << ';';
      seed_list << opt.seeds[i];
    }
    manifest.set("n_list", n_list.str());
    manifest.set("ratio_list", ratio_list.str());
    manifest.set("seeds", seed_list.str());
  }
  manifest.set("mode", opt.mode);
  manifest_solver(&manifest, opt.solver);
  manifest.write(opt.output, std::chrono::duration<double>(Clock::now() - t0).count());

  std::cout << "sweep wrote " << cs_sweep_num_rows(sweep.get()) << " rows to "
            << opt.output << "\n";
  return kExitOk;
}

int run_analyze(const AnalyzeOptions& opt) {
  const auto t0 = Clock::now();
  TracesHandle original;
  TracesHandle recovered;
  require_ok(cs_traces_load_csv(opt.original.c_str(), original.out()),
             "load original traces");
  require_ok(cs_traces_load_csv(opt.recovered.c_str(), recovered.out()),
             "load recovered traces");

  ReportHandle report;
  if (opt.by == "time") {
    require_ok(cs_bin_by_time_of_day(original.get(), recovered.get(), opt.bin_hours,
                                     report.out()),
               "bin by time of day");
  } else if (opt.by == "accel") {
    require_ok(cs_bin_by_acceleration(original.get(), recovered.get(), opt.bin_width,
                                      report.out()),
               "bin by acceleration");
  } else {
    std::cerr << "error: --by must be 'time' or 'accel'\n";
    return kExitUsage;
  }
  require_ok(cs_report_save_csv(report.get(), opt.output.c_str()), "save report CSV");

  Manifest manifest("analyze");
  manifest.set("original", opt.original);
  manifest.set("recovered", opt.recovered);
  manifest.set("output", opt.output);
  manifest.set("by", opt.by);
  manifest.set_int("bin_hours", opt.bin_hours);
  manifest.set_double("bin_width", opt.bin_width);
  manifest.write(opt.output, std::chrono::duration<double>(Clock::now() - t0).count());

  std::cout << "analysis wrote " << cs_report_num_bins(report.get()) << " bins to "
            << opt.output << "\n";
  return kExitOk;
}

std::vector<std::uint64_t> parse_u64_list(const std::string& joined) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(joined);
  std::string token;
  while (std::getline(ss, token, ';')) out.push_back(std::stoull(token));
  return out;
}

int run_rerun(const std::string& manifest_path, const std::string& output_override) {
  const auto kv = read_manifest(manifest_path);
  const std::string command = manifest_get(kv, "command");
  auto output = [&](const char* key = "output") {
    return output_override.empty() ? manifest_get(kv, key) : output_override;
  };

  if (command == "synth") {
    SynthOptions opt;
    opt.output = output();
    opt.trips = static_cast<std::int32_t>(std::stol(manifest_get(kv, "trips")));
    opt.duration_min_s = std::stod(manifest_get(kv, "duration_min_s"));
    opt.duration_max_s = std::stod(manifest_get(kv, "duration_max_s"));
    opt.mean_mps = std::stod(manifest_get(kv, "mean_mps"));
    opt.std_mps = std::stod(manifest_get(kv, "std_mps"));
    opt.max_accel = std::stod(manifest_get(kv, "max_accel_mps2"));
    opt.smooth_fraction = std::stod(manifest_get(kv, "smooth_fraction"));
    opt.seed = std::stoull(manifest_get(kv, "seed"));
    return run_synth(opt);
  }
  if (command == "compress") {
    CompressOptions opt;
    opt.input = manifest_get(kv, "input");
    opt.output = output();
    opt.n = static_cast<std::uint32_t>(std::stoul(manifest_get(kv, "n")));
    opt.ratio = std::stod(manifest_get(kv, "ratio"));
    opt.mode = manifest_get(kv, "mode");
    opt.seed = std::stoull(manifest_get(kv, "seed"));
    return run_compress(opt);
  }
  if (command == "recover") {
    RecoverOptions opt;
    opt.input = manifest_get(kv, "input");
    opt.output = output();
    opt.solver = solver_from_manifest(kv);
    return run_recover(opt);
  }
  if (command == "evaluate") {
    EvaluateOptions opt;
    opt.original = manifest_get(kv, "original");
    opt.recovered = manifest_get(kv, "recovered");
    opt.output = output();
    return run_evaluate(opt);
  }
  if (command == "sweep") {
    SweepOptions opt;
    opt.input = manifest_get(kv, "input");
    opt.output = output();
    for (const std::uint64_t n : parse_u64_list(manifest_get(kv, "n_list"))) {
      opt.n_list.push_back(static_cast<std::uint32_t>(n));
    }
    {
      std::stringstream ss(manifest_get(kv, "ratio_list"));
      std::string token;
      while (std::getline(ss, token, ';')) opt.ratio_list.push_back(std::stod(token));
    }
    opt.seeds = parse_u64_list(manifest_get(kv, "seeds"));
    opt.mode = manifest_get(kv, "mode");
    opt.solver = solver_from_manifest(kv);
    return run_sweep(opt);
  }
  if (command == "analyze") {
    AnalyzeOptions opt;
    opt.original = manifest_get(kv, "original");
    opt.recovered = manifest_get(kv, "recovered");
    opt.output = output();
    opt.by = manifest_get(kv, "by");
    opt.bin_hours = static_cast<std::int32_t>(std::stol(manifest_get(kv, "bin_hours")));
    opt.bin_width = std::stod(manifest_get(kv, "bin_width"));
    return run_analyze(opt);
  }
  std::cerr << "error: manifest has unknown command '" << command << "'\n";
  return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cscodec: compressive speed-stream codec"};
  app.set_version_flag("--version", std::string(cs_version()));
  app.require_subcommand(1);

  SynthOptions synth;
  auto* synth_cmd = app.add_subcommand("synth", "Generate synthetic speed traces");
  synth_cmd->add_option("-o,--output", synth.output, "Output trace CSV")->required();
  synth_cmd->add_option("--trips", synth.trips, "Number of trips");
  synth_cmd->add_option("--duration-min", synth.duration_min_s, "Min trip seconds");
  synth_cmd->add_option("--duration-max", synth.duration_max_s, "Max trip seconds");
  synth_cmd->add_option("--mean", synth.mean_mps, "Target mean speed (m/s)");
  synth_cmd->add_option("--std", synth.std_mps, "Target speed std (m/s)");
  synth_cmd->add_option("--max-accel", synth.max_accel, "Sharp-ramp cap (m/s^2)");
  synth_cmd->add_option("--smooth-fraction", synth.smooth_fraction,
                        "Share of smooth transitions in [0,1]");
  synth_cmd->add_option("--seed", synth.seed, "RNG seed");

  CompressOptions compress;
  auto* compress_cmd =
      app.add_subcommand("compress", "Compressively sample a trace file");
  compress_cmd->add_option("input", compress.input, "Input trace CSV")->required();
  compress_cmd->add_option("-o,--output", compress.output, "Output compressed file")
      ->required();
  compress_cmd->add_option("--n", compress.n, "Block length N");
  compress_cmd->add_option("--ratio", compress.ratio, "Compression ratio M/N");
  compress_cmd->add_option("--m", compress.m, "Measurements per block M");
  compress_cmd->add_option("--mode", compress.mode, "bernoulli or exact_m")
      ->check(CLI::IsMember({"bernoulli", "exact_m"}));
  compress_cmd->add_option("--seed", compress.seed, "RNG seed");

  RecoverOptions recover;
  auto* recover_cmd =
      app.add_subcommand("recover", "Recover traces from a compressed file");
  recover_cmd->add_option("input", recover.input, "Input compressed file")->required();
  recover_cmd->add_option("-o,--output", recover.output, "Output trace CSV")
      ->required();
  add_solver_flags(recover_cmd, &recover.solver);

  EvaluateOptions evaluate;
  auto* evaluate_cmd =
      app.add_subcommand("evaluate", "Normalized RMSE between two trace files");
  evaluate_cmd->add_option("--original", evaluate.original, "Original trace CSV")
      ->required();
  evaluate_cmd->add_option("--recovered", evaluate.recovered, "Recovered trace CSV")
      ->required();
  evaluate_cmd->add_option("-o,--output", evaluate.output, "Output report CSV")
      ->required();

  SweepOptions sweep;
  auto* sweep_cmd =
      app.add_subcommand("sweep", "Compression/recovery sweep over an (N, M) grid");
  sweep_cmd->add_option("input", sweep.input, "Input trace CSV")->required();
  sweep_cmd->add_option("-o,--output", sweep.output, "Output sweep CSV")->required();
  sweep_cmd->add_option("--n-list", sweep.n_list, "Block lengths")
      ->required()
      ->delimiter(',');
  sweep_cmd->add_option("--ratio-list", sweep.ratio_list, "Compression ratios")
      ->required()
      ->delimiter(',');
  sweep_cmd->add_option("--seeds", sweep.seeds, "Seeds (one run per seed)")
      ->required()
      ->delimiter(',');
  sweep_cmd->add_option("--mode", sweep.mode, "bernoulli or exact_m")
      ->check(CLI::IsMember({"bernoulli", "exact_m"}));
  add_solver_flags(sweep_cmd, &sweep.solver);

  AnalyzeOptions analyze;
  auto* analyze_cmd =
      app.add_subcommand("analyze", "Binned error report (time of day / acceleration)");
  analyze_cmd->add_option("--original", analyze.original, "Original trace CSV")
      ->required();
  analyze_cmd->add_option("--recovered", analyze.recovered, "Recovered trace CSV")
      ->required();
  analyze_cmd->add_option("-o,--output", analyze.output, "Output report CSV")
      ->required();
  analyze_cmd->add_option("--by", analyze.by, "time or accel")
      ->check(CLI::IsMember({"time", "accel"}));
  analyze_cmd->add_option("--bin-hours", analyze.bin_hours, "Time bin width (hours)");
  analyze_cmd->add_option("--bin-width", analyze.bin_width,
                          "Acceleration bin width (m/s^2)");

  std::string rerun_manifest;
  std::string rerun_output;
  auto* rerun_cmd = app.add_subcommand("rerun", "Replay a run from its manifest");
  rerun_cmd->add_option("manifest", rerun_manifest, "Manifest file")->required();
  rerun_cmd->add_option("-o,--output", rerun_output,
                        "Redirect the primary output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (synth_cmd->parsed()) return run_synth(synth);
  if (compress_cmd->parsed()) return run_compress(compress);
  if (recover_cmd->parsed()) return run_recover(recover);
  if (evaluate_cmd->parsed()) return run_evaluate(evaluate);
  if (sweep_cmd->parsed()) return run_sweep(sweep);
  if (analyze_cmd->parsed()) return run_analyze(analyze);
  if (rerun_cmd->parsed()) return run_rerun(rerun_manifest, rerun_output);
  return kExitUsage;
}
