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

#include "cscodec/cscodec.h"

#include <exception>
#include <memory>
#include <string>
#include <vector>

#include "core/error.hpp"
#include "core/ingestion.hpp"
#include "core/metrics.hpp"
#include "core/recovery.hpp"
#include "core/sampler.hpp"
#include "core/serialization.hpp"
#include "core/types.hpp"
#include "core/version.hpp"

namespace {

thread_local std::string g_last_error;

cs_status map_code(cscodec::ErrorCode code) {
  using cscodec::ErrorCode;
  switch (code) {
    case ErrorCode::kInvalidArgument: return CS_ERR_INVALID_ARGUMENT;
    case ErrorCode::kIo: return CS_ERR_IO;
    case ErrorCode::kFormat: return CS_ERR_FORMAT;
    case ErrorCode::kNoMeasurements: return CS_ERR_NO_MEASUREMENTS;
    case ErrorCode::kConvergence: return CS_ERR_CONVERGENCE;
    case ErrorCode::kInfeasible: return CS_ERR_INFEASIBLE;
    case ErrorCode::kUndefinedMetric: return CS_ERR_UNDEFINED_METRIC;
    case ErrorCode::kConfig: return CS_ERR_CONFIG;
    case ErrorCode::kInternal: return CS_ERR_INTERNAL;
  }
  return CS_ERR_INTERNAL;
}

template <typename Fn>
cs_status guarded(Fn&& fn) {
  try {
    fn();
    return CS_OK;
  } catch (const cscodec::Error& e) {
    g_last_error = e.what();
    return map_code(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return CS_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return CS_ERR_INTERNAL;
  }
}

cscodec::SolverConfig to_solver_config(const cs_solver_params& params) {
  cscodec::SolverConfig cfg;
  cfg.algorithm = params.algorithm == CS_SOLVER_LINPROG_BP
                      ? cscodec::SolverAlgorithm::kLinprogBp
                      : cscodec::SolverAlgorithm::kAdmmBp;
  cfg.eq_tolerance = params.eq_tolerance;
  cfg.max_iterations = params.max_iterations;
  cfg.admm_penalty = params.admm_penalty;
  cfg.zero_threshold = params.zero_threshold;
  cfg.normalize_columns = params.normalize_columns != 0;
  cfg.jobs = params.jobs;
  return cfg;
}

cs_status fail_invalid(const char* message) {
  g_last_error = message;
  return CS_ERR_INVALID_ARGUMENT;
}

}  // namespace

struct cs_traces {
  std::vector<cscodec::SpeedTrace> traces;
};

struct cs_compressed {
  std::vector<cscodec::CompressedTrace> traces;
};

struct cs_recovery {
  cs_traces traces;
  size_t total_blocks = 0;
  size_t zero_retention = 0;
  std::vector<std::string> errors;
};

struct cs_sweep {
  cscodec::SweepResult result;
};

struct cs_report {
  cscodec::BinnedErrorReport report;
};

struct cs_evaluation {
  cscodec::EvaluationReport report;
};

extern "C" {

const char* cs_status_name(cs_status status) {
  switch (status) {
    case CS_OK: return "ok";
    case CS_ERR_INVALID_ARGUMENT: return "invalid-argument";
    case CS_ERR_IO: return "io";
    case CS_ERR_FORMAT: return "format";
    case CS_ERR_NO_MEASUREMENTS: return "no-measurements";
    case CS_ERR_CONVERGENCE: return "convergence";
    case CS_ERR_INFEASIBLE: return "infeasible";
    case CS_ERR_UNDEFINED_METRIC: return "undefined-metric";
    case CS_ERR_CONFIG: return "config";
    case CS_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* cs_last_error(void) { return g_last_error.c_str(); }

const char* cs_version(void) { return cscodec::kVersion; }

void cs_traces_free(cs_traces* traces) { delete traces; }
void cs_compressed_free(cs_compressed* compressed) { delete compressed; }
void cs_recovery_free(cs_recovery* recovery) { delete recovery; }
void cs_sweep_free(cs_sweep* sweep) { delete sweep; }
void cs_report_free(cs_report* report) { delete report; }
void cs_evaluation_free(cs_evaluation* evaluation) { delete evaluation; }

cs_status cs_traces_load_csv(const char* path, cs_traces** out) {
  if (!path || !out) return fail_invalid("cs_traces_load_csv: null argument");
  return guarded([&] {
    auto handle = std::make_unique<cs_traces>();
    handle->traces = cscodec::load_traces_csv_file(path);
    *out = handle.release();
  });
}

cs_status cs_traces_save_csv(const cs_traces* traces, const char* path) {
  if (!traces || !path) return fail_invalid("cs_traces_save_csv: null argument");
  return guarded([&] { cscodec::save_traces_csv_file(traces->traces, path); });
}

cs_status cs_traces_from_bsm_csv(const char* path, double rate_hz,
                                 cs_traces** out, size_t* bad_rows) {
  if (!path || !out) return fail_invalid("cs_traces_from_bsm_csv: null argument");
  return guarded([&] {
    cscodec::BsmParseResult parsed = cscodec::parse_bsm_csv_file(path);
    cscodec::sort_records(parsed.records);
    auto handle = std::make_unique<cs_traces>();
    handle->traces = cscodec::segment_trips(parsed.records, rate_hz);
    if (bad_rows) *bad_rows = parsed.issues.size();
    *out = handle.release();
  });
}

size_t cs_traces_count(const cs_traces* traces) {
  return traces ? traces->traces.size() : 0;
}

cs_status cs_traces_info(const cs_traces* traces, size_t index,
                         const char** trip_id, const char** device_id,
                         double* start_time, double* sample_rate_hz,
                         size_t* num_samples) {
  if (!traces) return fail_invalid("cs_traces_info: null handle");
  if (index >= traces->traces.size())
    return fail_invalid("cs_traces_info: index out of range");
  const cscodec::SpeedTrace& t = traces->traces[index];
  if (trip_id) *trip_id = t.trip_id.c_str();
  if (device_id) *device_id = t.device_id.c_str();
  if (start_time) *start_time = t.start_time;
  if (sample_rate_hz) *sample_rate_hz = t.sample_rate_hz;
  if (num_samples) *num_samples = t.speeds.size();
  return CS_OK;
}

cs_status cs_traces_speeds(const cs_traces* traces, size_t index,
                           const double** data, size_t* len) {
  if (!traces || !data || !len) return fail_invalid("cs_traces_speeds: null argument");
  if (index >= traces->traces.size())
    return fail_invalid("cs_traces_speeds: index out of range");
  *data = traces->traces[index].speeds.data();
  *len = traces->traces[index].speeds.size();
  return CS_OK;
}

void cs_synth_params_init(cs_synth_params* params) {
  if (!params) return;
  const cscodec::SynthConfig defaults;
  params->num_trips = defaults.num_trips;
  params->duration_min_s = defaults.duration_min_s;
  params->duration_max_s = defaults.duration_max_s;
  params->target_mean_mps = defaults.target_mean_mps;
  params->target_std_mps = defaults.target_std_mps;
  params->max_accel_mps2 = defaults.max_accel_mps2;
  params->smooth_fraction = defaults.smooth_fraction;
  params->seed = defaults.rng_seed;
}

cs_status cs_traces_synthesize(const cs_synth_params* params, cs_traces** out) {
  if (!params || !out) return fail_invalid("cs_traces_synthesize: null argument");
  return guarded([&] {
    cscodec::SynthConfig cfg;
    cfg.num_trips = params->num_trips;
    cfg.duration_min_s = params->duration_min_s;
    cfg.duration_max_s = params->duration_max_s;
    cfg.target_mean_mps = params->target_mean_mps;
    cfg.target_std_mps = params->target_std_mps;
    cfg.max_accel_mps2 = params->max_accel_mps2;
    cfg.smooth_fraction = params->smooth_fraction;
    cfg.rng_seed = params->seed;
    auto handle = std::make_unique<cs_traces>();
    handle->traces = cscodec::generate_synthetic_traces(cfg);
    *out = handle.release();
  });
}

void cs_compress_params_init(cs_compress_params* params) {
  if (!params) return;
  params->block_length = 200;
  params->ratio = 0.2;
  params->mode = CS_SAMPLING_BERNOULLI;
  params->seed = 1;
}

cs_status cs_compress(const cs_traces* traces, const cs_compress_params* params,
                      cs_compressed** out) {
  if (!traces || !params || !out) return fail_invalid("cs_compress: null argument");
  return guarded([&] {
    const cscodec::SamplingMode mode = params->mode == CS_SAMPLING_EXACT_M
                                           ? cscodec::SamplingMode::kExactM
                                           : cscodec::SamplingMode::kBernoulli;
    auto handle = std::make_unique<cs_compressed>();
    handle->traces.reserve(traces->traces.size());
    for (const auto& trace : traces->traces) {
      handle->traces.push_back(cscodec::compress_trace(
          trace, params->block_length, params->ratio, mode, params->seed));
    }
    *out = handle.release();
  });
}

cs_status cs_compressed_save(const cs_compressed* compressed, const char* path) {
  if (!compressed || !path) return fail_invalid("cs_compressed_save: null argument");
  return guarded([&] { cscodec::save_compressed_file(compressed->traces, path); });
}

cs_status cs_compressed_load(const char* path, cs_compressed** out) {
  if (!path || !out) return fail_invalid("cs_compressed_load: null argument");
  return guarded([&] {
    auto handle = std::make_unique<cs_compressed>();
    handle->traces = cscodec::load_compressed_file(path);
    *out = handle.release();
  });
}

size_t cs_compressed_count(const cs_compressed* compressed) {
  return compressed ? compressed->traces.size() : 0;
}

cs_status cs_compressed_retained_fraction(const cs_compressed* compressed,
                                          double* out) {
  if (!compressed || !out)
    return fail_invalid("cs_compressed_retained_fraction: null argument");
  return guarded([&] {
    size_t retained = 0;
    size_t total = 0;
    for (const auto& ct : compressed->traces) {
      for (const auto& block : ct.blocks) retained += block.retained_indices.size();
      total += ct.blocks.size() * static_cast<size_t>(ct.n);
    }
    cscodec::check(total > 0, cscodec::ErrorCode::kUndefinedMetric,
                   "retained fraction undefined: no full blocks");
    *out = static_cast<double>(retained) / static_cast<double>(total);
  });
}

void cs_solver_params_init(cs_solver_params* params) {
  if (!params) return;
  const cscodec::SolverConfig defaults;
  params->algorithm = CS_SOLVER_ADMM_BP;
  params->eq_tolerance = defaults.eq_tolerance;
  params->max_iterations = defaults.max_iterations;
  params->admm_penalty = defaults.admm_penalty;
  params->zero_threshold = defaults.zero_threshold;
  params->normalize_columns = defaults.normalize_columns ? 1 : 0;
  params->jobs = defaults.jobs;
}

cs_status cs_recover(const cs_compressed* compressed,
                     const cs_solver_params* params, cs_recovery** out) {
  if (!compressed || !params || !out) return fail_invalid("cs_recover: null argument");
  return guarded([&] {
    const cscodec::SolverConfig cfg = to_solver_config(*params);
    auto handle = std::make_unique<cs_recovery>();
    handle->traces.traces.reserve(compressed->traces.size());
    for (const auto& ct : compressed->traces) {
      cscodec::TraceRecovery rec = cscodec::recover_trace(ct, cfg);
      handle->total_blocks += rec.blocks.size();
      for (const auto& block : rec.blocks) {
        if (block.status == cscodec::BlockStatus::kZeroRetention) {
          ++handle->zero_retention;
        } else if (block.status == cscodec::BlockStatus::kFailed) {
          handle->errors.push_back(ct.trip_id + ": " + block.error);
        }
      }
      handle->traces.traces.push_back(std::move(rec.trace));
    }
    *out = handle.release();
  });
}

const cs_traces* cs_recovery_traces(const cs_recovery* recovery) {
  return recovery ? &recovery->traces : nullptr;
}

size_t cs_recovery_total_blocks(const cs_recovery* recovery) {
  return recovery ? recovery->total_blocks : 0;
}

size_t cs_recovery_failed_blocks(const cs_recovery* recovery) {
  return recovery ? recovery->errors.size() : 0;
}

size_t cs_recovery_zero_retention_blocks(const cs_recovery* recovery) {
  return recovery ? recovery->zero_retention : 0;
}

const char* cs_recovery_error(const cs_recovery* recovery, size_t index) {
  if (!recovery || index >= recovery->errors.size()) return nullptr;
  return recovery->errors[index].c_str();
}

cs_status cs_evaluate(const cs_traces* original, const cs_traces* recovered,
                      cs_evaluation** out) {
  if (!original || !recovered || !out) return fail_invalid("cs_evaluate: null argument");
  return guarded([&] {
    auto handle = std::make_unique<cs_evaluation>();
    handle->report = cscodec::evaluate_traces(original->traces, recovered->traces);
    *out = handle.release();
  });
}

cs_status cs_evaluation_global_rmse(const cs_evaluation* evaluation, double* out) {
  if (!evaluation || !out)
    return fail_invalid("cs_evaluation_global_rmse: null argument");
  *out = evaluation->report.global_rmse;
  return CS_OK;
}

cs_status cs_evaluation_save_csv(const cs_evaluation* evaluation, const char* path) {
  if (!evaluation || !path)
    return fail_invalid("cs_evaluation_save_csv: null argument");
  return guarded([&] { cscodec::save_evaluation_csv_file(evaluation->report, path); });
}

cs_status cs_sweep_run(const cs_traces* traces, const uint32_t* ns,
                       const uint32_t* ms, size_t num_cells,
                       const uint64_t* seeds, size_t num_seeds,
                       cs_sampling_mode mode, const cs_solver_params* params,
                       cs_sweep** out) {
  if (!traces || !ns || !ms || !seeds || !params || !out || num_cells == 0 ||
      num_seeds == 0) {
    return fail_invalid("cs_sweep_run: null or empty argument");
  }
  return guarded([&] {
    std::vector<cscodec::SweepCell> grid(num_cells);
    for (size_t i = 0; i < num_cells; ++i) grid[i] = {ns[i], ms[i]};
    const std::vector<uint64_t> seed_list(seeds, seeds + num_seeds);
    const cscodec::SamplingMode sampling = mode == CS_SAMPLING_EXACT_M
                                               ? cscodec::SamplingMode::kExactM
                                               : cscodec::SamplingMode::kBernoulli;
    auto handle = std::make_unique<cs_sweep>();
    handle->result = cscodec::run_sweep(traces->traces, grid, seed_list, sampling,
                                        to_solver_config(*params));
    *out = handle.release();
  });
}

size_t cs_sweep_num_rows(const cs_sweep* sweep) {
  return sweep ? sweep->result.rows.size() : 0;
}

cs_status cs_sweep_row(const cs_sweep* sweep, size_t index, uint32_t* n,
                       uint32_t* m, double* ratio, double* mean_block_rmse,
                       double* global_rmse, double* mean_recovery_time_s,
                       uint64_t* num_blocks) {
  if (!sweep) return fail_invalid("cs_sweep_row: null handle");
  if (index >= sweep->result.rows.size())
    return fail_invalid("cs_sweep_row: index out of range");
  const cscodec::SweepRow& row = sweep->result.rows[index];
  if (n) *n = row.n;
  if (m) *m = row.m_nominal;
  if (ratio) *ratio = row.ratio;
  if (mean_block_rmse) *mean_block_rmse = row.mean_block_rmse;
  if (global_rmse) *global_rmse = row.global_rmse;
  if (mean_recovery_time_s) *mean_recovery_time_s = row.mean_recovery_time_s;
  if (num_blocks) *num_blocks = row.num_blocks;
  return CS_OK;
}

cs_status cs_sweep_save_csv(const cs_sweep* sweep, const char* path) {
  if (!sweep || !path) return fail_invalid("cs_sweep_save_csv: null argument");
  return guarded([&] { cscodec::save_sweep_csv_file(sweep->result, path); });
}

cs_status cs_bin_by_time_of_day(const cs_traces* original,
                                const cs_traces* recovered, int32_t bin_hours,
                                cs_report** out) {
  if (!original || !recovered || !out)
    return fail_invalid("cs_bin_by_time_of_day: null argument");
  return guarded([&] {
    auto handle = std::make_unique<cs_report>();
    handle->report =
        cscodec::bin_by_time_of_day(original->traces, recovered->traces, bin_hours);
    *out = handle.release();
  });
}

cs_status cs_bin_by_acceleration(const cs_traces* original,
                                 const cs_traces* recovered, double bin_width,
                                 cs_report** out) {
  if (!original || !recovered || !out)
    return fail_invalid("cs_bin_by_acceleration: null argument");
  return guarded([&] {
    auto handle = std::make_unique<cs_report>();
    handle->report =
        cscodec::bin_by_acceleration(original->traces, recovered->traces, bin_width);
    *out = handle.release();
  });
}

size_t cs_report_num_bins(const cs_report* report) {
  return report ? report->report.bins.size() : 0;
}

cs_status cs_report_save_csv(const cs_report* report, const char* path) {
  if (!report || !path) return fail_invalid("cs_report_save_csv: null argument");
  return guarded([&] { cscodec::save_binned_csv_file(report->report, path); });
}

}  // extern "C"
