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

#include "core/ingestion.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "core/error.hpp"
#include "core/rng.hpp"

namespace cscodec {

namespace {

constexpr char kBsmHeader[] = "device_id,timestamp,speed_mps";

bool parse_field_double(const std::string& token, double* out) {
  if (token.empty()) return false;
  const char* begin = token.c_str();
  char* end = nullptr;
  *out = std::strtod(begin, &end);
  return end == begin + token.size();
}

}  // namespace

BsmParseResult parse_bsm_csv(std::istream& in) {
  BsmParseResult result;
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) return result;  // empty file -> empty list
  ++lineno;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  check(line == kBsmHeader, ErrorCode::kFormat,
        "BSM CSV: missing header '" + std::string(kBsmHeader) + "'");

  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::size_t c1 = line.find(',');
    const std::size_t c2 = (c1 == std::string::npos) ? std::string::npos
                                                     : line.find(',', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos ||
        line.find(',', c2 + 1) != std::string::npos) {
      result.issues.push_back({lineno, "expected 3 fields"});
      continue;
    }
    BsmRecord rec;
    rec.device_id = line.substr(0, c1);
    if (rec.device_id.empty()) {
      result.issues.push_back({lineno, "empty device_id"});
      continue;
    }
    if (!parse_field_double(line.substr(c1 + 1, c2 - c1 - 1), &rec.timestamp) ||
        !std::isfinite(rec.timestamp)) {
      result.issues.push_back({lineno, "bad timestamp"});
      continue;
    }
    if (!parse_field_double(line.substr(c2 + 1), &rec.speed_mps) ||
        !std::isfinite(rec.speed_mps)) {
      result.issues.push_back({lineno, "bad speed"});
      continue;
    }
    if (rec.speed_mps < 0.0) {
      result.issues.push_back({lineno, "negative speed"});
      continue;
    }
    result.records.push_back(std::move(rec));
  }
  return result;
}

BsmParseResult parse_bsm_csv_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  check(in.is_open(), ErrorCode::kIo, "cannot open '" + path + "' for reading");
  return parse_bsm_csv(in);
}

void sort_records(std::vector<BsmRecord>& records) {
  std::stable_sort(records.begin(), records.end(),
                   [](const BsmRecord& a, const BsmRecord& b) {
                     if (a.device_id != b.device_id) return a.device_id < b.device_id;
                     return a.timestamp < b.timestamp;
                   });
}

std::vector<SpeedTrace> segment_trips(const std::vector<BsmRecord>& records,
                                      double rate_hz) {
  check(rate_hz > 0.0 && std::isfinite(rate_hz), ErrorCode::kInvalidArgument,
        "segment_trips: rate_hz must be positive");
  std::vector<SpeedTrace> trips;
  const double nominal_gap = 1.0 / rate_hz;
  const double tolerance = 0.25 / rate_hz;

  std::map<std::string, int> trip_counter;
  const BsmRecord* prev = nullptr;
  for (const auto& rec : records) {
    const bool new_trip =
        prev == nullptr || prev->device_id != rec.device_id ||
        std::abs((rec.timestamp - prev->timestamp) - nominal_gap) > tolerance;
    if (new_trip) {
      char suffix[24];
      std::snprintf(suffix, sizeof(suffix), "#%d", trip_counter[rec.device_id]++);
      SpeedTrace trace;
      trace.trip_id = rec.device_id + suffix;
      trace.device_id = rec.device_id;
      trace.start_time = rec.timestamp;
      trace.sample_rate_hz = rate_hz;
      trips.push_back(std::move(trace));
    }
    trips.back().speeds.push_back(rec.speed_mps);
    prev = &rec;
  }
  return trips;
}

namespace {

// Base speed-level mixture used by the generator, expressed as time shares:
// 10% stopped, and nonzero cruise levels split low/mid/high. The nonzero part
// has mean ~19.72 and std ~9.53; ramp transit between independently drawn
// levels then shrinks the pooled spread. kRampVarKeep is the measured
// fraction of the level variance that survives pooling.
constexpr double kBaseNonzeroMean = 19.72;
constexpr double kBaseNonzeroStd = 9.53;
constexpr double kMaxSpeed = 36.0;

// Affine map applied to the base speed-level mixture, plus the share of
// transitions that target a full stop.
struct LevelMap {
  double scale = 1.0;
  double offset = 0.0;
  double stop_share = 0.10;
};

// Stops inject variance f/(1-f) * mean^2 on their own, so the stop share
// adapts to the requested spread: small for tight-variance targets, larger
// when the target std is big relative to the mean.
double solve_stop_share(const SynthConfig& cfg) {
  const double var = cfg.target_std_mps * cfg.target_std_mps;
  const double ceiling = var / (var + cfg.target_mean_mps * cfg.target_mean_mps);
  return std::clamp(0.5 * ceiling, 0.005, 0.30);
}

// Analytic first guess for the affine level map; ramp transit and stop
// dwells then shift the pooled statistics, which the pilot calibration in
// generate_synthetic_traces corrects.
LevelMap solve_level_map(const SynthConfig& cfg) {
  LevelMap map;
  map.stop_share = solve_stop_share(cfg);
  const double keep = 1.0 - map.stop_share;
  const double mean_nz = cfg.target_mean_mps / keep;
  const double second_moment_nz =
      (cfg.target_std_mps * cfg.target_std_mps +
       cfg.target_mean_mps * cfg.target_mean_mps) /
      keep;
  const double var_nz = second_moment_nz - mean_nz * mean_nz;
  check(var_nz > 0.0, ErrorCode::kConfig,
        "generate_synthetic_traces: std target infeasible for the mean target");
  map.scale = std::sqrt(var_nz) / kBaseNonzeroStd;
  map.offset = mean_nz - map.scale * kBaseNonzeroMean;
  return map;
}

double draw_level(Rng& rng, const LevelMap& map) {
  const double r = rng.u01();
  double level;
  if (r < 0.15 / 0.9) {
    level = rng.uniform(2.0, 8.0);
  } else if (r < 0.40 / 0.9) {
    level = rng.uniform(8.0, 18.0);
  } else {
    level = rng.uniform(22.0, 33.0);
  }
  return std::clamp(map.scale * level + map.offset, 0.5, kMaxSpeed);
}

void validate_config(const SynthConfig& cfg) {
  check(cfg.num_trips >= 1, ErrorCode::kConfig, "num_trips must be >= 1");
  check(cfg.duration_min_s >= 1.0 && cfg.duration_max_s >= cfg.duration_min_s,
        ErrorCode::kConfig, "duration range must be ordered and >= 1 s");
  check(cfg.smooth_fraction >= 0.0 && cfg.smooth_fraction <= 1.0,
        ErrorCode::kConfig, "smooth_fraction must be in [0, 1]");
  check(cfg.target_mean_mps > 0.0 && cfg.target_mean_mps < kMaxSpeed,
        ErrorCode::kConfig, "target mean must be in (0, 36) m/s");
  check(cfg.target_std_mps > 0.0, ErrorCode::kConfig, "target std must be positive");
  check(cfg.target_std_mps * cfg.target_std_mps <=
            cfg.target_mean_mps * (kMaxSpeed - cfg.target_mean_mps),
        ErrorCode::kConfig,
        "std target incompatible with nonnegative speeds at this mean");
  if (cfg.smooth_fraction < 1.0) {
    check(cfg.max_accel_mps2 >= 0.5, ErrorCode::kConfig,
          "sharp ramps require max_accel_mps2 >= 0.5");
  } else {
    check(cfg.max_accel_mps2 > 0.0, ErrorCode::kConfig,
          "max_accel_mps2 must be positive");
  }
}

constexpr double kDt = 0.1;  // 10 Hz
// Smooth-regime acceleration caps. Central differencing averages two
// consecutive per-step slopes, so any sum of two caps must stay below the
// 0.3 m/s^2 smooth-bin edge.
constexpr double kCruiseAccelCap = 0.12;
constexpr double kSmoothRampLo = 0.16;
constexpr double kSmoothRampHi = 0.28;

class TripSimulator {
 public:
  TripSimulator(Rng& rng, const SynthConfig& cfg, const LevelMap& map)
      : rng_(rng), cfg_(cfg), map_(map) {}

  std::vector<double> run(std::size_t num_samples) {
    std::vector<double> speeds;
    speeds.reserve(num_samples);
    v_ = 0.0;
    // Trips begin at rest.
    emit_stop(speeds, num_samples, rng_.uniform(3.0, 10.0));
    while (speeds.size() < num_samples) {
      const double level = draw_next_level();
      emit_ramp(speeds, num_samples, level);
      if (level == 0.0) {
        emit_stop(speeds, num_samples, rng_.uniform(20.0, 60.0));
      } else {
        emit_cruise(speeds, num_samples, level, rng_.uniform(20.0, 60.0));
      }
    }
    return speeds;
  }

 private:
  double draw_next_level() {
    if (rng_.u01() < map_.stop_share) return 0.0;
    return draw_level(rng_, map_);
  }

  void emit_stop(std::vector<double>& out, std::size_t cap, double dwell_s) {
    v_ = 0.0;
    const auto steps = static_cast<std::size_t>(std::llround(dwell_s / kDt));
    for (std::size_t i = 0; i < steps && out.size() < cap; ++i) out.push_back(0.0);
  }

  void emit_cruise(std::vector<double>& out, std::size_t cap, double level,
                   double dwell_s) {
    const auto steps = static_cast<std::size_t>(std::llround(dwell_s / kDt));
    for (std::size_t i = 0; i < steps && out.size() < cap; ++i) {
      ou_ = 0.9 * ou_ + 0.03 * rng_.normal();
      const double pull = std::clamp(0.1 * (level - v_), -0.08, 0.08);
      const double a = std::clamp(pull + ou_, -kCruiseAccelCap, kCruiseAccelCap);
      v_ = std::clamp(v_ + a * kDt, 0.0, kMaxSpeed);
      out.push_back(v_);
    }
  }

  void emit_ramp(std::vector<double>& out, std::size_t cap, double target) {
    const double dv = std::abs(target - v_);
    const bool sharp_event = rng_.u01() >= cfg_.smooth_fraction;
    double mag;
    if (cfg_.smooth_fraction < 1.0 && (sharp_event || dv > 12.0)) {
      // Fast ramp: braking into and pulling away from stops happens at
      // realistic rates; pick a duration and clamp the implied rate.
      const double duration = rng_.uniform(8.0, 20.0);
      mag = std::clamp(dv / duration, 0.5, cfg_.max_accel_mps2);
    } else {
      mag = rng_.uniform(kSmoothRampLo, kSmoothRampHi);
    }
    const double step = mag * kDt;
    while (std::abs(target - v_) > step && out.size() < cap) {
      v_ += (target > v_) ? step : -step;
      out.push_back(v_);
    }
    if (out.size() < cap) {
      v_ = target;
      out.push_back(v_);
    }
  }

  Rng& rng_;
  const SynthConfig& cfg_;
  const LevelMap& map_;
  double v_ = 0.0;
  double ou_ = 0.0;
};

}  // namespace

namespace {

struct PooledStats {
  double mean = 0.0;
  double stddev = 0.0;
};

PooledStats pilot_stats(const SynthConfig& cfg, const LevelMap& map) {
  const int pilot_trips = 40;
  const double duration = 0.5 * (cfg.duration_min_s + cfg.duration_max_s);
  const auto samples_per_trip =
      static_cast<std::size_t>(std::max<long long>(1, std::llround(duration / kDt)));
  double sum = 0.0;
  double sum_sq = 0.0;
  std::size_t count = 0;
  for (int k = 0; k < pilot_trips; ++k) {
    Rng rng(substream_seed(cfg.rng_seed, "synth-pilot", static_cast<std::uint64_t>(k)));
    TripSimulator sim(rng, cfg, map);
    for (double v : sim.run(samples_per_trip)) {
      sum += v;
      sum_sq += v * v;
      ++count;
    }
  }
  PooledStats stats;
  stats.mean = sum / static_cast<double>(count);
  stats.stddev = std::sqrt(
      std::max(0.0, sum_sq / static_cast<double>(count) - stats.mean * stats.mean));
  return stats;
}

// Feedback calibration of the level map against a deterministic pilot run:
// the scale tracks the std target, the offset tracks the mean target.
LevelMap calibrate_level_map(const SynthConfig& cfg) {
  LevelMap map = solve_level_map(cfg);
  for (int round = 0; round < 8; ++round) {
    const PooledStats stats = pilot_stats(cfg, map);
    const bool mean_ok =
        std::abs(stats.mean - cfg.target_mean_mps) < 0.02 * cfg.target_mean_mps;
    const bool std_ok =
        std::abs(stats.stddev - cfg.target_std_mps) < 0.02 * cfg.target_std_mps;
    if (mean_ok && std_ok) break;
    if (stats.stddev > 1e-9) {
      const double gain = std::pow(cfg.target_std_mps / stats.stddev, 0.7);
      map.scale = std::clamp(map.scale * gain, 0.02, 5.0);
    }
    map.offset = std::clamp(
        map.offset + 0.7 * (cfg.target_mean_mps - stats.mean) /
                         (1.0 - map.stop_share),
        -30.0, 30.0);
  }
  return map;
}

}  // namespace

std::vector<SpeedTrace> generate_synthetic_traces(const SynthConfig& cfg) {
  validate_config(cfg);
  const LevelMap map = calibrate_level_map(cfg);
  // 2013-04-01 00:00:00 UTC; trips laid out across the day.
  const double base_time = 1364774400.0;

  std::vector<SpeedTrace> traces;
  traces.reserve(static_cast<std::size_t>(cfg.num_trips));
  for (int k = 0; k < cfg.num_trips; ++k) {
    Rng rng(substream_seed(cfg.rng_seed, "synth", static_cast<std::uint64_t>(k)));
    const double duration = rng.uniform(cfg.duration_min_s, cfg.duration_max_s);
    const auto num_samples =
        static_cast<std::size_t>(std::max<long long>(1, std::llround(duration / kDt)));

    SpeedTrace trace;
    char device[16];
    std::snprintf(device, sizeof(device), "synth%04d", k);
    trace.device_id = device;
    trace.trip_id = trace.device_id + "#0";
    trace.start_time = base_time + 977.0 * k;
    trace.sample_rate_hz = 10.0;
    TripSimulator sim(rng, cfg, map);
    trace.speeds = sim.run(num_samples);
    validate_trace(trace);
    traces.push_back(std::move(trace));
  }
  return traces;
}

}  // namespace cscodec
