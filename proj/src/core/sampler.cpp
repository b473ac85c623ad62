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

#include "core/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "core/error.hpp"
#include "core/rng.hpp"

namespace cscodec {

namespace {

std::vector<std::uint32_t> draw_bernoulli_indices(Rng& rng, std::uint32_t n,
                                                  double ratio) {
  std::vector<std::uint32_t> kept;
  for (std::uint32_t i = 0; i < n; ++i) {
    if (rng.u01() <= ratio) kept.push_back(i);
  }
  return kept;
}

std::vector<std::uint32_t> draw_exact_m_indices(Rng& rng, std::uint32_t n,
                                                std::uint32_t m) {
  // Partial Fisher-Yates: the first m slots are a uniform m-subset.
  std::vector<std::uint32_t> pool(n);
  std::iota(pool.begin(), pool.end(), 0u);
  for (std::uint32_t k = 0; k < m; ++k) {
    const auto j = k + static_cast<std::uint32_t>(rng.below(n - k));
    std::swap(pool[k], pool[j]);
  }
  pool.resize(m);
  std::sort(pool.begin(), pool.end());
  return pool;
}

}  // namespace

CompressedTrace compress_trace(const SpeedTrace& trace, std::uint32_t n,
                               double ratio, SamplingMode mode,
                               std::uint64_t seed) {
  validate_trace(trace);
  check(n >= 2, ErrorCode::kInvalidArgument, "compress_trace: n must be >= 2");
  check(ratio > 0.0 && ratio <= 1.0, ErrorCode::kInvalidArgument,
        "compress_trace: ratio must be in (0, 1]");
  std::uint32_t m_exact = 0;
  if (mode == SamplingMode::kExactM) {
    m_exact = static_cast<std::uint32_t>(std::llround(ratio * n));
    check(m_exact >= 1, ErrorCode::kInvalidArgument,
          "compress_trace: exact_m mode requires round(ratio*n) >= 1");
  }

  CompressedTrace ct;
  ct.trip_id = trace.trip_id;
  ct.device_id = trace.device_id;
  ct.start_time = trace.start_time;
  ct.sample_rate_hz = trace.sample_rate_hz;
  ct.n = n;

  const std::size_t num_blocks = trace.speeds.size() / n;
  ct.blocks.reserve(num_blocks);
  for (std::size_t b = 0; b < num_blocks; ++b) {
    Rng rng(substream_seed(seed, trace.trip_id, b));
    CompressedBlock block;
    block.block_index = static_cast<std::uint32_t>(b);
    block.n = n;
    block.ratio = ratio;
    block.mode = mode;
    block.rng_seed = seed;
    block.retained_indices = (mode == SamplingMode::kBernoulli)
                                 ? draw_bernoulli_indices(rng, n, ratio)
                                 : draw_exact_m_indices(rng, n, m_exact);
    block.retained_values.reserve(block.retained_indices.size());
    for (std::uint32_t idx : block.retained_indices) {
      block.retained_values.push_back(trace.speeds[b * n + idx]);
    }
    ct.blocks.push_back(std::move(block));
  }

  ct.tail.assign(trace.speeds.begin() + static_cast<std::ptrdiff_t>(num_blocks * n),
                 trace.speeds.end());
  return ct;
}

double retained_fraction(const CompressedTrace& ct) {
  validate_compressed_trace(ct);
  check(!ct.blocks.empty(), ErrorCode::kUndefinedMetric,
        "retained_fraction: no full blocks");
  std::size_t retained = 0;
  for (const auto& block : ct.blocks) retained += block.retained_indices.size();
  return static_cast<double>(retained) /
         (static_cast<double>(ct.blocks.size()) * ct.n);
}

}  // namespace cscodec
