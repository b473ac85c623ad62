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

#include "core/types.hpp"

#include <cmath>

#include "core/error.hpp"

namespace cscodec {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid-argument";
    case ErrorCode::kIo: return "io";
    case ErrorCode::kFormat: return "format";
    case ErrorCode::kNoMeasurements: return "no-measurements";
    case ErrorCode::kConvergence: return "convergence";
    case ErrorCode::kInfeasible: return "infeasible";
    case ErrorCode::kUndefinedMetric: return "undefined-metric";
    case ErrorCode::kConfig: return "config";
    case ErrorCode::kInternal: return "internal";
  }
  return "unknown";
}

void validate_trace(const SpeedTrace& trace, bool require_nonnegative) {
  check(!trace.speeds.empty(), ErrorCode::kInvalidArgument,
        "SpeedTrace '" + trace.trip_id + "': speeds must be nonempty");
  check(trace.sample_rate_hz > 0.0 && std::isfinite(trace.sample_rate_hz),
        ErrorCode::kInvalidArgument,
        "SpeedTrace '" + trace.trip_id + "': sample_rate_hz must be positive");
  check(std::isfinite(trace.start_time), ErrorCode::kInvalidArgument,
        "SpeedTrace '" + trace.trip_id + "': start_time must be finite");
  for (double v : trace.speeds) {
    check(std::isfinite(v), ErrorCode::kInvalidArgument,
          "SpeedTrace '" + trace.trip_id + "': speeds must be finite");
    check(!require_nonnegative || v >= 0.0, ErrorCode::kInvalidArgument,
          "SpeedTrace '" + trace.trip_id + "': speeds must be >= 0");
  }
}

const char* to_string(SamplingMode mode) {
  return mode == SamplingMode::kBernoulli ? "bernoulli" : "exact_m";
}

SamplingMode sampling_mode_from_string(const std::string& name) {
  if (name == "bernoulli") return SamplingMode::kBernoulli;
  if (name == "exact_m") return SamplingMode::kExactM;
  throw Error(ErrorCode::kInvalidArgument, "unknown sampling mode '" + name + "'");
}

void validate_block(const CompressedBlock& block) {
  check(block.n > 0, ErrorCode::kInvalidArgument, "CompressedBlock: n must be positive");
  check(block.retained_indices.size() == block.retained_values.size(),
        ErrorCode::kInvalidArgument,
        "CompressedBlock: indices and values must have equal length");
  check(block.ratio > 0.0 && block.ratio <= 1.0, ErrorCode::kInvalidArgument,
        "CompressedBlock: ratio must be in (0, 1]");
  for (std::size_t k = 0; k < block.retained_indices.size(); ++k) {
    check(block.retained_indices[k] < block.n, ErrorCode::kInvalidArgument,
          "CompressedBlock: index out of range");
    if (k > 0) {
      check(block.retained_indices[k - 1] < block.retained_indices[k],
            ErrorCode::kInvalidArgument,
            "CompressedBlock: indices must be strictly increasing");
    }
    check(std::isfinite(block.retained_values[k]), ErrorCode::kInvalidArgument,
          "CompressedBlock: values must be finite");
  }
  if (block.mode == SamplingMode::kExactM) {
    const auto expected =
        static_cast<std::size_t>(std::llround(block.ratio * block.n));
    check(block.retained_indices.size() == expected, ErrorCode::kInvalidArgument,
          "CompressedBlock: exact_m block must retain round(ratio*n) samples");
  }
}

void validate_compressed_trace(const CompressedTrace& ct) {
  check(ct.n > 0, ErrorCode::kInvalidArgument, "CompressedTrace: n must be positive");
  check(ct.tail.size() < ct.n, ErrorCode::kInvalidArgument,
        "CompressedTrace: tail must be shorter than the block length");
  for (std::size_t b = 0; b < ct.blocks.size(); ++b) {
    check(ct.blocks[b].block_index == b, ErrorCode::kInvalidArgument,
          "CompressedTrace: block_index values must be consecutive from 0");
    check(ct.blocks[b].n == ct.n, ErrorCode::kInvalidArgument,
          "CompressedTrace: all blocks must share the trace block length");
    validate_block(ct.blocks[b]);
  }
}

}  // namespace cscodec
