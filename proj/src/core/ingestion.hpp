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

#ifndef CSCODEC_CORE_INGESTION_HPP_
#define CSCODEC_CORE_INGESTION_HPP_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "core/types.hpp"

namespace cscodec {

struct BsmRecord {
  std::string device_id;
  double timestamp = 0.0;  // epoch seconds, 0.1 s resolution
  double speed_mps = 0.0;
};

struct ParseIssue {
  std::size_t line = 0;
  std::string reason;
};

struct BsmParseResult {
  std::vector<BsmRecord> records;
  std::vector<ParseIssue> issues;  // malformed rows, skipped but reported
};

// Parses `device_id,timestamp,speed_mps` CSV. Bad rows land in `issues` and
// parsing continues. A nonempty file without the exact header is a format
// error; a zero-byte file yields an empty result.
BsmParseResult parse_bsm_csv(std::istream& in);
BsmParseResult parse_bsm_csv_file(const std::string& path);

// Stable sort by device_id, then timestamp — the order segment_trips expects.
void sort_records(std::vector<BsmRecord>& records);

// Splits per-device record runs into trips. A trip ends when the timestamp
// gap deviates from 1/rate_hz by more than 0.25/rate_hz (jitter tolerance).
// Requires records grouped by device and time-sorted within each device.
// Trip ids are assigned as `device_id#k`, k counting from 0 per device.
std::vector<SpeedTrace> segment_trips(const std::vector<BsmRecord>& records,
                                      double rate_hz = 10.0);

// Synthetic-trace generator configuration. Speed targets default to the
// aggregate statistics of the reference deployment data set.
struct SynthConfig {
  int num_trips = 100;
  double duration_min_s = 300.0;
  double duration_max_s = 700.0;
  double target_mean_mps = 17.23;
  double target_std_mps = 10.83;
  double max_accel_mps2 = 3.0;
  // Probability that a speed transition uses a smooth ramp (|a| < 0.3);
  // 1.0 keeps every sample's acceleration below 0.3 m/s^2.
  double smooth_fraction = 0.9;
  std::uint64_t rng_seed = 1;
};

// Regime-switching speed model (stops, cruise segments with bounded drift,
// smooth ramps, occasional sharp ramps) sampled at 10 Hz. Deterministic for
// a fixed config; each trip draws from its own substream.
std::vector<SpeedTrace> generate_synthetic_traces(const SynthConfig& cfg);

}  // namespace cscodec

#endif  // CSCODEC_CORE_INGESTION_HPP_
