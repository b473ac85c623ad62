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

#ifndef CSCODEC_CORE_SERIALIZATION_HPP_
#define CSCODEC_CORE_SERIALIZATION_HPP_

#include <iosfwd>
#include <string>
#include <vector>

#include "core/types.hpp"

namespace cscodec {

// Canonical full-precision decimal rendering ("%.17g"): parsing the output
// recovers the exact double, so serialize -> parse -> serialize is
// byte-identical.
std::string format_double(double v);

// Trace CSV: header `trip_id,device_id,timestamp,speed_mps`, one row per
// sample, timestamps at start_time + i / rate. Mirrors the BSM input format
// with a leading trip_id column.
void save_traces_csv(const std::vector<SpeedTrace>& traces, std::ostream& out);
std::vector<SpeedTrace> load_traces_csv(std::istream& in);

// Compressed stream, line-delimited text. One `#trace` metadata line per
// trip followed by one record per block:
//   trip_id,block_index,n,ratio,mode,seed,i0;i1;...,v0;v1;...
// The raw tail is a record with block_index = -1 and empty indices.
void save_compressed(const std::vector<CompressedTrace>& traces, std::ostream& out);
std::vector<CompressedTrace> load_compressed(std::istream& in);

// File-path conveniences; throw ErrorCode::kIo on open failure.
void save_traces_csv_file(const std::vector<SpeedTrace>& traces, const std::string& path);
std::vector<SpeedTrace> load_traces_csv_file(const std::string& path);
void save_compressed_file(const std::vector<CompressedTrace>& traces, const std::string& path);
std::vector<CompressedTrace> load_compressed_file(const std::string& path);

}  // namespace cscodec

#endif  // CSCODEC_CORE_SERIALIZATION_HPP_
