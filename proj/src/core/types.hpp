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

#ifndef CSCODEC_CORE_TYPES_HPP_
#define CSCODEC_CORE_TYPES_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace cscodec {

// One trip's uniformly sampled speed series.
struct SpeedTrace {
  std::string trip_id;
  std::string device_id;
  double start_time = 0.0;       // epoch seconds
  double sample_rate_hz = 10.0;  // fixed sampling rate
  std::vector<double> speeds;    // m/s, nonnegative

  std::size_t size() const { return speeds.size(); }
};

// Throws ErrorCode::kInvalidArgument when an invariant is violated. Recovered
// traces may carry small negative excursions from the l1 reconstruction, so
// callers handling solver output pass require_nonnegative = false.
void validate_trace(const SpeedTrace& trace, bool require_nonnegative = true);

enum class SamplingMode {
  kBernoulli,  // keep each sample independently with probability = ratio
  kExactM,     // keep exactly round(ratio*n) samples per block
};

const char* to_string(SamplingMode mode);
SamplingMode sampling_mode_from_string(const std::string& name);

// Retained (index, value) pairs for one length-n block.
struct CompressedBlock {
  std::uint32_t block_index = 0;
  std::uint32_t n = 0;
  std::vector<std::uint32_t> retained_indices;  // strictly increasing, in [0, n)
  std::vector<double> retained_values;          // m/s, same length as indices
  double ratio = 1.0;                           // nominal compression ratio
  SamplingMode mode = SamplingMode::kBernoulli;
  std::uint64_t rng_seed = 0;
};

void validate_block(const CompressedBlock& block);

// All blocks of one trip plus the uncompressed tail (length < n).
struct CompressedTrace {
  std::string trip_id;
  std::string device_id;
  double start_time = 0.0;
  double sample_rate_hz = 10.0;
  std::uint32_t n = 0;
  std::vector<CompressedBlock> blocks;  // block_index consecutive from 0
  std::vector<double> tail;             // raw final partial block, may be empty

  // Length of the original trace this was produced from.
  std::size_t original_length() const {
    return blocks.size() * static_cast<std::size_t>(n) + tail.size();
  }
};

void validate_compressed_trace(const CompressedTrace& ct);

}  // namespace cscodec

#endif  // CSCODEC_CORE_TYPES_HPP_
