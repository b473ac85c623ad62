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

#include "core/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>

#include "core/sampler.hpp"
#include "core/serialization.hpp"

namespace cscodec {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

void check_aligned(const std::vector<SpeedTrace>& original,
                   const std::vector<SpeedTrace>& recovered) {
  check(original.size() == recovered.size(), ErrorCode::kInvalidArgument,
        "trace sets must have the same number of trips");
  for (std::size_t i = 0; i < original.size(); ++i) {
    check(original[i].speeds.size() == recovered[i].speeds.size(),
          ErrorCode::kInvalidArgument,
          "trip '" + original[i].trip_id + "': sample counts differ");
  }
}

// Shared accumulator for binned reports.
struct BinAccum {
  double sum = 0.0;
  double sum_sq = 0.0;
  double err_sq = 0.0;
  std::uint64_t count = 0;

  void add(double orig, double rec) {
    sum += orig;
    sum_sq += orig * orig;
    const double e = orig - rec;
    err_sq += e * e;
    ++count;
  }
};

BinRow finish_bin(std::string label, double lower, double upper, const BinAccum& a) {
  BinRow row;
  row.label = std::move(label);
  row.lower = lower;
  row.upper = upper;
  row.sample_count = a.count;
  if (a.count == 0) {
    row.mean_speed = row.std_speed = row.rmse = kNan;
    return row;
  }
  const double n = static_cast<double>(a.count);
  row.mean_speed = a.sum / n;
  const double var = std::max(0.0, a.sum_sq / n - row.mean_speed * row.mean_speed);
  row.std_speed = std::sqrt(var);
  row.rmse = (a.sum_sq > 0.0) ? std::sqrt(a.err_sq / a.sum_sq) : kNan;
  return row;
}

std::string format_cell(double v) {
  return std::isnan(v) ? "nan" : format_double(v);
}

}  // namespace

double rmse_normalized(std::span<const double> original,
                       std::span<const double> recovered) {
  check(original.size() == recovered.size(), ErrorCode::kInvalidArgument,
        "rmse_normalized: length mismatch");
  check(!original.empty(), ErrorCode::kInvalidArgument,
        "rmse_normalized: empty input");
  RmseAccumulator acc;
  acc.add(original, recovered);
  return acc.value();
}

void RmseAccumulator::add(std::span<const double> original,
                          std::span<const double> recovered) {
  check(original.size() == recovered.size(), ErrorCode::kInvalidArgument,
        "RmseAccumulator: length mismatch");
  for (std::size_t i = 0; i < original.size(); ++i) {
    const double e = original[i] - recovered[i];
    error_sq += e * e;
    signal_sq += original[i] * original[i];
  }
}

double RmseAccumulator::value() const {
  check(signal_sq > 0.0, ErrorCode::kUndefinedMetric,
        "normalized RMSE undefined for a zero-norm original");
  return std::sqrt(error_sq / signal_sq);
}

std::vector<double> acceleration_series(const SpeedTrace& trace) {
  const auto& v = trace.speeds;
  check(v.size() >= 2, ErrorCode::kInvalidArgument,
        "acceleration_series: need at least 2 samples");
  const double rate = trace.sample_rate_hz;
  std::vector<double> a(v.size());
  a.front() = (v[1] - v[0]) * rate;
  a.back() = (v[v.size() - 1] - v[v.size() - 2]) * rate;
  for (std::size_t i = 1; i + 1 < v.size(); ++i) {
    a[i] = (v[i + 1] - v[i - 1]) * rate / 2.0;
  }
  return a;
}

SweepResult run_sweep(const std::vector<SpeedTrace>& traces,
                      const std::vector<SweepCell>& grid,
                      const std::vector<std::uint64_t>& seeds, SamplingMode mode,
                      const SolverConfig& cfg) {
  check(!grid.empty(), ErrorCode::kInvalidArgument, "run_sweep: empty grid");
  check(!seeds.empty(), ErrorCode::kInvalidArgument, "run_sweep: empty seed list");
  check(!traces.empty(), ErrorCode::kInvalidArgument, "run_sweep: no traces");
  for (const auto& cell : grid) {
    check(cell.n >= 2 && cell.m_nominal >= 1 && cell.m_nominal <= cell.n,
          ErrorCode::kInvalidArgument, "run_sweep: bad (n, m) cell");
  }

  SweepResult result;
  for (const auto& cell : grid) {
    const double ratio = static_cast<double>(cell.m_nominal) / cell.n;
    SweepRow row;
    row.n = cell.n;
    row.m_nominal = cell.m_nominal;
    row.ratio = ratio;

    RmseAccumulator global;
    double block_rmse_sum = 0.0;
    std::uint64_t block_rmse_count = 0;
    double time_sum = 0.0;
    std::uint64_t time_count = 0;

    for (const std::uint64_t seed : seeds) {
      for (const auto& trace : traces) {
        try {
          const CompressedTrace ct =
              compress_trace(trace, cell.n, ratio, mode, seed);
          const TraceRecovery rec = recover_trace(ct, cfg);
          global.add(trace.speeds, rec.trace.speeds);
          for (const auto& block : rec.blocks) {
            row.num_blocks += (block.status != BlockStatus::kZeroRetention);
            if (block.status == BlockStatus::kFailed) {
              ++row.num_failed_blocks;
              result.errors.push_back("n=" + std::to_string(cell.n) +
                                      " m=" + std::to_string(cell.m_nominal) +
                                      " seed=" + std::to_string(seed) + " " +
                                      block.error);
              continue;
            }
            if (block.status != BlockStatus::kOk) continue;
            time_sum += block.result.wall_time_s;
            ++time_count;
            const std::size_t begin =
                static_cast<std::size_t>(block.block_index) * cell.n;
            const std::span<const double> orig(trace.speeds.data() + begin, cell.n);
            double orig_sq = 0.0;
            for (double s : orig) orig_sq += s * s;
            if (orig_sq <= 0.0) continue;  // all-zero block, metric undefined
            const std::span<const double> rec_block(
                rec.trace.speeds.data() + begin, cell.n);
            block_rmse_sum += rmse_normalized(orig, rec_block);
            ++block_rmse_count;
          }
        } catch (const Error& e) {
          result.errors.push_back("n=" + std::to_string(cell.n) +
                                  " m=" + std::to_string(cell.m_nominal) +
                                  " seed=" + std::to_string(seed) + " trip=" +
                                  trace.trip_id + ": " + e.what());
        }
      }
    }

    row.mean_block_rmse =
        block_rmse_count ? block_rmse_sum / static_cast<double>(block_rmse_count)
                         : kNan;
    row.global_rmse = global.signal_sq > 0.0 ? global.value() : kNan;
    row.mean_recovery_time_s =
        time_count ? time_sum / static_cast<double>(time_count) : kNan;
    result.rows.push_back(std::move(row));
  }
  return result;
}

void save_sweep_csv(const SweepResult& result, std::ostream& out) {
  out << "n,m_nominal,ratio,mean_block_rmse,global_rmse,mean_recovery_time_s,"
         "num_blocks\n";
  for (const auto& row : result.rows) {
    out << row.n << ',' << row.m_nominal << ',' << format_double(row.ratio) << ','
        << format_cell(row.mean_block_rmse) << ',' << format_cell(row.global_rmse)
        << ',' << format_cell(row.mean_recovery_time_s) << ',' << row.num_blocks
        << '\n';
  }
  check(out.good(), ErrorCode::kIo, "failed writing sweep CSV");
}

BinnedErrorReport bin_by_time_of_day(const std::vector<SpeedTrace>& original,
                                     const std::vector<SpeedTrace>& recovered,
                                     int bin_hours, int bin_offset_hours) {
  check_aligned(original, recovered);
  check(bin_hours >= 1 && bin_hours <= 24 && 24 % bin_hours == 0,
        ErrorCode::kInvalidArgument, "bin_hours must divide 24");
  check(bin_offset_hours >= 0 && bin_offset_hours < bin_hours,
        ErrorCode::kInvalidArgument, "bin offset must be in [0, bin_hours)");

  const int num_bins = 24 / bin_hours;
  std::vector<BinAccum> accums(static_cast<std::size_t>(num_bins));
  for (std::size_t t = 0; t < original.size(); ++t) {
    const SpeedTrace& orig = original[t];
    const double rate = orig.sample_rate_hz;
    for (std::size_t i = 0; i < orig.speeds.size(); ++i) {
      const double ts = orig.start_time + static_cast<double>(i) / rate;
      const double seconds_of_day = std::fmod(ts, 86400.0);
      const int hour =
          static_cast<int>((seconds_of_day < 0 ? seconds_of_day + 86400.0
                                               : seconds_of_day) /
                           3600.0) %
          24;
      const int idx = ((hour - bin_offset_hours) % 24 + 24) % 24 / bin_hours;
      accums[static_cast<std::size_t>(idx)].add(orig.speeds[i],
                                                recovered[t].speeds[i]);
    }
  }

  BinnedErrorReport report;
  for (int b = 0; b < num_bins; ++b) {
    const int start = (bin_offset_hours + b * bin_hours) % 24;
    const int last = (start + bin_hours - 1) % 24;
    char label[16];
    std::snprintf(label, sizeof(label), "%d-%d", start, last);
    report.bins.push_back(finish_bin(label, start, start + bin_hours,
                                     accums[static_cast<std::size_t>(b)]));
  }
  return report;
}

BinnedErrorReport bin_by_acceleration(const std::vector<SpeedTrace>& original,
                                      const std::vector<SpeedTrace>& recovered,
                                      double bin_width) {
  check_aligned(original, recovered);
  check(bin_width > 0.0 && std::isfinite(bin_width), ErrorCode::kInvalidArgument,
        "bin_width must be positive");

  std::map<long, BinAccum> accums;  // key: floor(a / width)
  for (std::size_t t = 0; t < original.size(); ++t) {
    const SpeedTrace& orig = original[t];
    if (orig.speeds.size() < 2) continue;  // acceleration undefined
    const std::vector<double> accel = acceleration_series(orig);
    for (std::size_t i = 0; i < orig.speeds.size(); ++i) {
      const long key = static_cast<long>(std::floor(accel[i] / bin_width));
      accums[key].add(orig.speeds[i], recovered[t].speeds[i]);
    }
  }

  BinnedErrorReport report;
  if (accums.empty()) return report;
  const long lo = accums.begin()->first;
  const long hi = accums.rbegin()->first;
  for (long k = lo; k <= hi; ++k) {
    const double lower = static_cast<double>(k) * bin_width;
    const double upper = static_cast<double>(k + 1) * bin_width;
    char label[48];
    std::snprintf(label, sizeof(label), "[%g,%g)", lower, upper);
    const auto it = accums.find(k);
    report.bins.push_back(
        finish_bin(label, lower, upper, it == accums.end() ? BinAccum{} : it->second));
  }
  return report;
}

void save_binned_csv(const BinnedErrorReport& report, std::ostream& out) {
  out << "bin_label,bin_lower,bin_upper,mean_speed,std_speed,rmse,sample_count\n";
  for (const auto& bin : report.bins) {
    out << bin.label << ',' << format_double(bin.lower) << ','
        << format_double(bin.upper) << ',' << format_cell(bin.mean_speed) << ','
        << format_cell(bin.std_speed) << ',' << format_cell(bin.rmse) << ','
        << bin.sample_count << '\n';
  }
  check(out.good(), ErrorCode::kIo, "failed writing binned CSV");
}

EvaluationReport evaluate_traces(const std::vector<SpeedTrace>& original,
                                 const std::vector<SpeedTrace>& recovered) {
  check_aligned(original, recovered);
  check(!original.empty(), ErrorCode::kInvalidArgument,
        "evaluate_traces: no traces");
  EvaluationReport report;
  RmseAccumulator global;
  for (std::size_t t = 0; t < original.size(); ++t) {
    global.add(original[t].speeds, recovered[t].speeds);
    RmseAccumulator per_trip;
    per_trip.add(original[t].speeds, recovered[t].speeds);
    TripRmse trip;
    trip.trip_id = original[t].trip_id;
    trip.num_samples = original[t].speeds.size();
    trip.rmse = per_trip.signal_sq > 0.0 ? per_trip.value() : kNan;
    report.trips.push_back(std::move(trip));
    report.num_samples += original[t].speeds.size();
  }
  report.global_rmse = global.value();
  return report;
}

void save_evaluation_csv(const EvaluationReport& report, std::ostream& out) {
  out << "scope,trip_id,rmse,num_samples\n";
  out << "global,," << format_cell(report.global_rmse) << ',' << report.num_samples
      << '\n';
  for (const auto& trip : report.trips) {
    out << "trip," << trip.trip_id << ',' << format_cell(trip.rmse) << ','
        << trip.num_samples << '\n';
  }
  check(out.good(), ErrorCode::kIo, "failed writing evaluation CSV");
}

void save_sweep_csv_file(const SweepResult& result, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  check(out.is_open(), ErrorCode::kIo, "cannot open '" + path + "' for writing");
  save_sweep_csv(result, out);
}

void save_binned_csv_file(const BinnedErrorReport& report, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  check(out.is_open(), ErrorCode::kIo, "cannot open '" + path + "' for writing");
  save_binned_csv(report, out);
}

void save_evaluation_csv_file(const EvaluationReport& report, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  check(out.is_open(), ErrorCode::kIo, "cannot open '" + path + "' for writing");
  save_evaluation_csv(report, out);
}

}  // namespace cscodec
