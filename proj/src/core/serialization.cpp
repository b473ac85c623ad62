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

#include "core/serialization.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "core/error.hpp"

namespace cscodec {

namespace {

constexpr char kTraceCsvHeader[] = "trip_id,device_id,timestamp,speed_mps";
constexpr char kTraceMetaPrefix[] = "#trace";

void check_id(const std::string& id, const char* what) {
  check(!id.empty(), ErrorCode::kInvalidArgument,
        std::string(what) + " must be nonempty");
  check(id.find_first_of(",;\n\r") == std::string::npos, ErrorCode::kInvalidArgument,
        std::string(what) + " '" + id + "' must not contain ',', ';' or newlines");
}

double parse_double(const std::string& token, std::size_t line, const char* what) {
  const char* begin = token.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  check(end == begin + token.size() && !token.empty(), ErrorCode::kFormat,
        "line " + std::to_string(line) + ": bad " + what + " '" + token + "'");
  return v;
}

long long parse_ll(const std::string& token, std::size_t line, const char* what) {
  const char* begin = token.c_str();
  char* end = nullptr;
  const long long v = std::strtoll(begin, &end, 10);
  check(end == begin + token.size() && !token.empty(), ErrorCode::kFormat,
        "line " + std::to_string(line) + ": bad " + what + " '" + token + "'");
  return v;
}

std::uint64_t parse_u64(const std::string& token, std::size_t line, const char* what) {
  const char* begin = token.c_str();
  char* end = nullptr;
  const std::uint64_t v = std::strtoull(begin, &end, 10);
  check(end == begin + token.size() && !token.empty(), ErrorCode::kFormat,
        "line " + std::to_string(line) + ": bad " + what + " '" + token + "'");
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t next = s.find(sep, pos);
    if (next == std::string::npos) {
      out.push_back(s.substr(pos));
      break;
    }
    out.push_back(s.substr(pos, next - pos));
    pos = next + 1;
  }
  return out;
}

std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

// Rate from the first sample gap, snapped to 1 mHz to absorb the float error
// of timestamp differencing near large epochs.
double infer_rate(double t0, double t1) {
  const double gap = t1 - t0;
  check(gap > 0.0, ErrorCode::kFormat, "trace timestamps must be increasing");
  return std::round(1000.0 / gap) / 1000.0;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void save_traces_csv(const std::vector<SpeedTrace>& traces, std::ostream& out) {
  out << kTraceCsvHeader << '\n';
  for (const auto& trace : traces) {
    validate_trace(trace, /*require_nonnegative=*/false);
    check_id(trace.trip_id, "trip_id");
    check_id(trace.device_id, "device_id");
    for (std::size_t i = 0; i < trace.speeds.size(); ++i) {
      const double t = trace.start_time + static_cast<double>(i) / trace.sample_rate_hz;
      out << trace.trip_id << ',' << trace.device_id << ',' << format_double(t)
          << ',' << format_double(trace.speeds[i]) << '\n';
    }
  }
  check(out.good(), ErrorCode::kIo, "failed writing trace CSV");
}

std::vector<SpeedTrace> load_traces_csv(std::istream& in) {
  std::vector<SpeedTrace> traces;
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) return traces;  // empty input -> empty list
  ++lineno;
  check(strip_cr(line) == kTraceCsvHeader, ErrorCode::kFormat,
        "trace CSV: missing header '" + std::string(kTraceCsvHeader) + "'");

  // Rows of one trip are contiguous; a trip_id change starts a new trace.
  std::vector<double> times;
  auto finish = [&]() {
    if (traces.empty()) return;
    SpeedTrace& t = traces.back();
    if (times.size() >= 2) t.sample_rate_hz = infer_rate(times[0], times[1]);
    validate_trace(t, /*require_nonnegative=*/false);
    times.clear();
  };
  while (std::getline(in, line)) {
    ++lineno;
    line = strip_cr(line);
    if (line.empty()) continue;
    const auto fields = split(line, ',');
    check(fields.size() == 4, ErrorCode::kFormat,
          "line " + std::to_string(lineno) + ": expected 4 fields");
    if (traces.empty() || traces.back().trip_id != fields[0]) {
      finish();
      SpeedTrace t;
      t.trip_id = fields[0];
      t.device_id = fields[1];
      t.start_time = parse_double(fields[2], lineno, "timestamp");
      traces.push_back(std::move(t));
    }
    times.push_back(parse_double(fields[2], lineno, "timestamp"));
    traces.back().speeds.push_back(parse_double(fields[3], lineno, "speed"));
  }
  finish();
  return traces;
}

void save_compressed(const std::vector<CompressedTrace>& traces, std::ostream& out) {
  for (const auto& ct : traces) {
    validate_compressed_trace(ct);
    check_id(ct.trip_id, "trip_id");
    check_id(ct.device_id, "device_id");
    out << kTraceMetaPrefix << ',' << ct.trip_id << ',' << ct.device_id << ','
        << format_double(ct.start_time) << ',' << format_double(ct.sample_rate_hz)
        << ',' << ct.n << '\n';
    auto write_record = [&](long long block_index, double ratio, SamplingMode mode,
                            std::uint64_t seed, const std::vector<std::uint32_t>* indices,
                            const std::vector<double>& values) {
      out << ct.trip_id << ',' << block_index << ',' << ct.n << ','
          << format_double(ratio) << ',' << to_string(mode) << ',' << seed << ',';
      if (indices) {
        for (std::size_t k = 0; k < indices->size(); ++k) {
          if (k) out << ';';
          out << (*indices)[k];
        }
      }
      out << ',';
      for (std::size_t k = 0; k < values.size(); ++k) {
        if (k) out << ';';
        out << format_double(values[k]);
      }
      out << '\n';
    };
    for (const auto& block : ct.blocks) {
      write_record(block.block_index, block.ratio, block.mode, block.rng_seed,
                   &block.retained_indices, block.retained_values);
    }
    if (!ct.tail.empty()) {
      const auto& meta = ct.blocks.empty() ? CompressedBlock{} : ct.blocks.front();
      write_record(-1, ct.blocks.empty() ? 1.0 : meta.ratio,
                   ct.blocks.empty() ? SamplingMode::kBernoulli : meta.mode,
                   ct.blocks.empty() ? 0 : meta.rng_seed, nullptr, ct.tail);
    }
  }
  check(out.good(), ErrorCode::kIo, "failed writing compressed stream");
}

std::vector<CompressedTrace> load_compressed(std::istream& in) {
  std::vector<CompressedTrace> traces;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = strip_cr(line);
    if (line.empty()) continue;
    const auto fields = split(line, ',');
    if (fields[0] == kTraceMetaPrefix) {
      check(fields.size() == 6, ErrorCode::kFormat,
            "line " + std::to_string(lineno) + ": malformed #trace line");
      CompressedTrace ct;
      ct.trip_id = fields[1];
      ct.device_id = fields[2];
      ct.start_time = parse_double(fields[3], lineno, "start_time");
      ct.sample_rate_hz = parse_double(fields[4], lineno, "sample_rate_hz");
      ct.n = static_cast<std::uint32_t>(parse_ll(fields[5], lineno, "n"));
      traces.push_back(std::move(ct));
      continue;
    }
    check(fields.size() == 8, ErrorCode::kFormat,
          "line " + std::to_string(lineno) + ": expected 8 fields in block record");
    check(!traces.empty() && traces.back().trip_id == fields[0], ErrorCode::kFormat,
          "line " + std::to_string(lineno) + ": block record without #trace line");
    CompressedTrace& ct = traces.back();
    const long long block_index = parse_ll(fields[1], lineno, "block_index");
    const auto n = static_cast<std::uint32_t>(parse_ll(fields[2], lineno, "n"));
    check(n == ct.n, ErrorCode::kFormat,
          "line " + std::to_string(lineno) + ": block n differs from trace n");
    std::vector<double> values;
    if (!fields[7].empty()) {
      for (const auto& tok : split(fields[7], ';')) {
        values.push_back(parse_double(tok, lineno, "value"));
      }
    }
    if (block_index == -1) {
      check(fields[6].empty(), ErrorCode::kFormat,
            "line " + std::to_string(lineno) + ": tail record must have no indices");
      check(ct.tail.empty(), ErrorCode::kFormat,
            "line " + std::to_string(lineno) + ": duplicate tail record");
      ct.tail = std::move(values);
      continue;
    }
    CompressedBlock block;
    block.block_index = static_cast<std::uint32_t>(block_index);
    block.n = n;
    block.ratio = parse_double(fields[3], lineno, "ratio");
    block.mode = sampling_mode_from_string(fields[4]);
    block.rng_seed = parse_u64(fields[5], lineno, "seed");
    if (!fields[6].empty()) {
      for (const auto& tok : split(fields[6], ';')) {
        block.retained_indices.push_back(
            static_cast<std::uint32_t>(parse_ll(tok, lineno, "index")));
      }
    }
    block.retained_values = std::move(values);
    ct.blocks.push_back(std::move(block));
  }
  for (const auto& ct : traces) validate_compressed_trace(ct);
  return traces;
}

void save_traces_csv_file(const std::vector<SpeedTrace>& traces, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  check(out.is_open(), ErrorCode::kIo, "cannot open '" + path + "' for writing");
  save_traces_csv(traces, out);
}

std::vector<SpeedTrace> load_traces_csv_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  check(in.is_open(), ErrorCode::kIo, "cannot open '" + path + "' for reading");
  return load_traces_csv(in);
}

void save_compressed_file(const std::vector<CompressedTrace>& traces, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  check(out.is_open(), ErrorCode::kIo, "cannot open '" + path + "' for writing");
  save_compressed(traces, out);
}

std::vector<CompressedTrace> load_compressed_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  check(in.is_open(), ErrorCode::kIo, "cannot open '" + path + "' for reading");
  return load_compressed(in);
}

}  // namespace cscodec
