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

#ifndef CSCODEC_CORE_METRICS_HPP_
#define CSCODEC_CORE_METRICS_HPP_

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "core/recovery.hpp"
#include "core/types.hpp"

namespace cscodec {

// ||original - recovered||_2 / ||original||_2. Throws on length mismatch or a
// zero-norm original.
double rmse_normalized(std::span<const double> original,
                       std::span<const double> recovered);

// Streaming form of the same metric over several aligned pairs; lets callers
// compute one global value across traces without concatenating.
struct RmseAccumulator {
  double error_sq = 0.0;
  double signal_sq = 0.0;

  void add(std::span<const double> original, std::span<const double> recovered);
  double value() const;  // throws kUndefinedMetric when no signal energy
};

// Central differences scaled by the sample rate; one-sided at the ends.
// Output length equals input length. Requires >= 2 samples.
std::vector<double> acceleration_series(const SpeedTrace& trace);

struct SweepCell {
  std::uint32_t n = 0;
  std::uint32_t m_nominal = 0;
};

struct SweepRow {
  std::uint32_t n = 0;
  std::uint32_t m_nominal = 0;
  double ratio = 0.0;
  double mean_block_rmse = 0.0;  // mean of per-block normalized RMSE
  double global_rmse = 0.0;      // one metric over the whole recovered stream
  double mean_recovery_time_s = 0.0;
  std::uint64_t num_blocks = 0;        // full blocks recovered
  std::uint64_t num_failed_blocks = 0; // excluded from the means
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::vector<std::string> errors;  // per-cell failures, sweep continues
};

// Compress + recover every trace for each (n, m_nominal) cell and each seed,
// with ratio = m_nominal / n. Per-block RMSE skips blocks whose original has
// zero norm, zero retention, or a failed solve; the global value covers the
// whole assembled stream, tail included.
SweepResult run_sweep(const std::vector<SpeedTrace>& traces,
                      const std::vector<SweepCell>& grid,
                      const std::vector<std::uint64_t>& seeds, SamplingMode mode,
                      const SolverConfig& cfg);

void save_sweep_csv(const SweepResult& result, std::ostream& out);
void save_sweep_csv_file(const SweepResult& result, const std::string& path);

struct BinRow {
  std::string label;
  double lower = 0.0;
  double upper = 0.0;
  double mean_speed = 0.0;  // nan when the bin is empty
  double std_speed = 0.0;
  double rmse = 0.0;
  std::uint64_t sample_count = 0;
};

struct BinnedErrorReport {
  std::vector<BinRow> bins;
};

// Per-sample assignment to local-hour windows of bin_hours width, offset so
// the default 3 h windows read 1-3, 4-6, 7-9, ..., 19-21, 22-0. Metrics are
// computed over each bin's concatenated samples. Requires aligned trace sets.
BinnedErrorReport bin_by_time_of_day(const std::vector<SpeedTrace>& original,
                                     const std::vector<SpeedTrace>& recovered,
                                     int bin_hours = 3, int bin_offset_hours = 1);

// Per-sample squared errors grouped by the original trace's acceleration bin
// [k*w, (k+1)*w); per-bin RMSE is the error RMS over the bin's original RMS.
BinnedErrorReport bin_by_acceleration(const std::vector<SpeedTrace>& original,
                                      const std::vector<SpeedTrace>& recovered,
                                      double bin_width = 0.1);

void save_binned_csv(const BinnedErrorReport& report, std::ostream& out);
void save_binned_csv_file(const BinnedErrorReport& report, const std::string& path);

struct TripRmse {
  std::string trip_id;
  double rmse = 0.0;
  std::uint64_t num_samples = 0;
};

struct EvaluationReport {
  double global_rmse = 0.0;
  std::uint64_t num_samples = 0;
  std::vector<TripRmse> trips;
};

// Whole-stream and per-trip normalized RMSE between two aligned trace sets.
EvaluationReport evaluate_traces(const std::vector<SpeedTrace>& original,
                                 const std::vector<SpeedTrace>& recovered);

void save_evaluation_csv(const EvaluationReport& report, std::ostream& out);
void save_evaluation_csv_file(const EvaluationReport& report, const std::string& path);

}  // namespace cscodec

#endif  // CSCODEC_CORE_METRICS_HPP_
