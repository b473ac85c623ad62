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

#ifndef CSCODEC_CORE_SAMPLER_HPP_
#define CSCODEC_CORE_SAMPLER_HPP_

#include <cstdint>

#include "core/types.hpp"

namespace cscodec {

// Real-time compressive sampling of a speed trace.
//
// The trace is split into floor(L/n) full blocks plus an uncompressed tail of
// L mod n samples. Per block, either each sample is kept independently with
// probability = ratio (bernoulli) or exactly round(ratio*n) distinct indices
// are drawn uniformly without replacement (exact_m). Retained values are the
// original samples, untouched.
//
// The RNG stream of a block is derived from (seed, trip_id, block_index), so
// any block is reproducible without replaying the rest of the trace. The
// retained indices are stored explicitly regardless; recovery never needs to
// re-run the RNG.
CompressedTrace compress_trace(const SpeedTrace& trace, std::uint32_t n,
                               double ratio, SamplingMode mode,
                               std::uint64_t seed);

// Empirical compression ratio: retained samples / total block samples.
// The tail is excluded. Throws kUndefinedMetric when there are no full blocks.
double retained_fraction(const CompressedTrace& ct);

}  // namespace cscodec

#endif  // CSCODEC_CORE_SAMPLER_HPP_
