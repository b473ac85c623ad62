/* Copyright 2026 The cscodec Authors. All Rights Reserved.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface to the cscodec compressive speed-stream codec.
 *
 * All functions return a cs_status; CS_OK means success. On failure a
 * thread-local message is available through cs_last_error(). Out-parameters
 * are written only on success. Every handle type has a matching *_free()
 * which accepts NULL.
 */

#ifndef CSCODEC_CSCODEC_H_
#define CSCODEC_CSCODEC_H_

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cs_status {
  CS_OK = 0,
  CS_ERR_INVALID_ARGUMENT = 1,
  CS_ERR_IO = 2,
  CS_ERR_FORMAT = 3,
  CS_ERR_NO_MEASUREMENTS = 4,
  CS_ERR_CONVERGENCE = 5,
  CS_ERR_INFEASIBLE = 6,
  CS_ERR_UNDEFINED_METRIC = 7,
  CS_ERR_CONFIG = 8,
  CS_ERR_INTERNAL = 9
} cs_status;

const char* cs_status_name(cs_status status);

/* Message describing the most recent failure on this thread. */
const char* cs_last_error(void);

const char* cs_version(void);

/* Opaque handles. */
typedef struct cs_traces cs_traces;         /* ordered list of speed traces */
typedef struct cs_compressed cs_compressed; /* compressed trace set */
typedef struct cs_recovery cs_recovery;     /* recovery output */
typedef struct cs_sweep cs_sweep;           /* (n, m) grid sweep result */
typedef struct cs_report cs_report;         /* binned error report */
typedef struct cs_evaluation cs_evaluation; /* aligned-trace RMSE report */

void cs_traces_free(cs_traces* traces);
void cs_compressed_free(cs_compressed* compressed);
void cs_recovery_free(cs_recovery* recovery);
void cs_sweep_free(cs_sweep* sweep);
void cs_report_free(cs_report* report);
void cs_evaluation_free(cs_evaluation* evaluation);

/* ---------------- traces ---------------- */

/* Trace CSV: header trip_id,device_id,timestamp,speed_mps. */
cs_status cs_traces_load_csv(const char* path, cs_traces** out);
cs_status cs_traces_save_csv(const cs_traces* traces, const char* path);

/* BSM CSV: header device_id,timestamp,speed_mps. Records are sorted by
 * (device, time) and segmented into trips wherever the timestamp gap breaks
 * the 1/rate_hz spacing. Malformed row count is reported via bad_rows
 * (optional). */
cs_status cs_traces_from_bsm_csv(const char* path, double rate_hz,
                                 cs_traces** out, size_t* bad_rows);

size_t cs_traces_count(const cs_traces* traces);
cs_status cs_traces_info(const cs_traces* traces, size_t index,
                         const char** trip_id, const char** device_id,
                         double* start_time, double* sample_rate_hz,
                         size_t* num_samples);
/* Borrowed view of one trace's samples; valid while the handle lives. */
cs_status cs_traces_speeds(const cs_traces* traces, size_t index,
                           const double** data, size_t* len);

typedef struct cs_synth_params {
  int32_t num_trips;
  double duration_min_s;
  double duration_max_s;
  double target_mean_mps;
  double target_std_mps;
  double max_accel_mps2;
  double smooth_fraction; /* share of smooth transitions, in [0, 1] */
  uint64_t seed;
} cs_synth_params;

void cs_synth_params_init(cs_synth_params* params);
cs_status cs_traces_synthesize(const cs_synth_params* params, cs_traces** out);

/* ---------------- compression ---------------- */

typedef enum cs_sampling_mode {
  CS_SAMPLING_BERNOULLI = 0,
  CS_SAMPLING_EXACT_M = 1
} cs_sampling_mode;

typedef struct cs_compress_params {
  uint32_t block_length; /* n, >= 2 */
  double ratio;          /* (0, 1] */
  cs_sampling_mode mode;
  uint64_t seed;
} cs_compress_params;

void cs_compress_params_init(cs_compress_params* params);
cs_status cs_compress(const cs_traces* traces, const cs_compress_params* params,
                      cs_compressed** out);
cs_status cs_compressed_save(const cs_compressed* compressed, const char* path);
cs_status cs_compressed_load(const char* path, cs_compressed** out);
size_t cs_compressed_count(const cs_compressed* compressed);
/* Retained samples over total block samples, tail excluded. */
cs_status cs_compressed_retained_fraction(const cs_compressed* compressed,
                                          double* out);

/* ---------------- recovery ---------------- */

typedef enum cs_solver {
  CS_SOLVER_ADMM_BP = 0,
  CS_SOLVER_LINPROG_BP = 1
} cs_solver;

typedef struct cs_solver_params {
  cs_solver algorithm;
  double eq_tolerance;   /* ||theta a - y|| / max(1, ||y||) */
  int32_t max_iterations;
  double admm_penalty;
  double zero_threshold;
  int32_t normalize_columns; /* 0/1 */
  int32_t jobs;              /* worker threads for block recovery */
} cs_solver_params;

void cs_solver_params_init(cs_solver_params* params);

/* Recovers every block. Returns CS_OK even when individual blocks fail to
 * converge (their best iterate is used); inspect the failure counters. */
cs_status cs_recover(const cs_compressed* compressed,
                     const cs_solver_params* params, cs_recovery** out);
const cs_traces* cs_recovery_traces(const cs_recovery* recovery);
size_t cs_recovery_total_blocks(const cs_recovery* recovery);
size_t cs_recovery_failed_blocks(const cs_recovery* recovery);
size_t cs_recovery_zero_retention_blocks(const cs_recovery* recovery);
/* index < cs_recovery_failed_blocks(); message for the index-th failure. */
const char* cs_recovery_error(const cs_recovery* recovery, size_t index);

/* ---------------- metrics ---------------- */

cs_status cs_evaluate(const cs_traces* original, const cs_traces* recovered,
                      cs_evaluation** out);
cs_status cs_evaluation_global_rmse(const cs_evaluation* evaluation, double* out);
cs_status cs_evaluation_save_csv(const cs_evaluation* evaluation, const char* path);

/* Grid sweep: cells are (ns[i], ms[i]) pairs, ratio = m / n. Every cell is
 * run for every seed; per-cell failures are recorded, not fatal. */
cs_status cs_sweep_run(const cs_traces* traces, const uint32_t* ns,
                       const uint32_t* ms, size_t num_cells,
                       const uint64_t* seeds, size_t num_seeds,
                       cs_sampling_mode mode, const cs_solver_params* params,
                       cs_sweep** out);
size_t cs_sweep_num_rows(const cs_sweep* sweep);
cs_status cs_sweep_row(const cs_sweep* sweep, size_t index, uint32_t* n,
                       uint32_t* m, double* ratio, double* mean_block_rmse,
                       double* global_rmse, double* mean_recovery_time_s,
                       uint64_t* num_blocks);
cs_status cs_sweep_save_csv(const cs_sweep* sweep, const char* path);

cs_status cs_bin_by_time_of_day(const cs_traces* original,
                                const cs_traces* recovered, int32_t bin_hours,
                                cs_report** out);
cs_status cs_bin_by_acceleration(const cs_traces* original,
                                 const cs_traces* recovered, double bin_width,
                                 cs_report** out);
size_t cs_report_num_bins(const cs_report* report);
cs_status cs_report_save_csv(const cs_report* report, const char* path);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* CSCODEC_CSCODEC_H_ */
