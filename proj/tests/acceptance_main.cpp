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

// End-to-end acceptance suite. Each numbered check prints one PASS/FAIL
// line; the process exits nonzero if any check fails. Checks 1-8 drive the
// library directly; check 9 shells out to the cscodec CLI and compares the
// file-based pipeline against the in-process one.

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "core/ingestion.hpp"
#include "core/metrics.hpp"
#include "core/recovery.hpp"
#include "core/rng.hpp"
#include "core/sampler.hpp"
#include "core/serialization.hpp"
#include "core/transform.hpp"
#include "test_support.hpp"

using namespace cscodec;

namespace {

int g_failures = 0;

void report(int index, const std::string& name, bool pass, const std::string& detail) {
  std::printf("%s criterion %d: %s (%s)\n", pass ? "PASS" : "FAIL", index,
              name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

// ---------------------------------------------------------------- 1
void criterion_dct() {
  bool pass = true;
  std::string detail;
  for (int n : {100, 200, 500, 1000}) {
    const DctBasis basis(n);
    const double ortho = (basis.matrix().transpose() * basis.matrix() -
                          Eigen::MatrixXd::Identity(n, n))
                             .cwiseAbs()
                             .maxCoeff();
    pass = pass && ortho < 1e-10;

    Rng rng(substream_seed(1, "acc-dct", static_cast<std::uint64_t>(n)));
    double max_round_trip = 0.0;
    for (int rep = 0; rep < 100; ++rep) {
      Eigen::VectorXd x(n);
      for (int i = 0; i < n; ++i) x[i] = rng.uniform(-30.0, 30.0);
      max_round_trip = std::max(
          max_round_trip,
          (basis.inverse(basis.forward(x)) - x).cwiseAbs().maxCoeff());
    }
    pass = pass && max_round_trip < 1e-10;

    const double mu = coherence(basis.matrix());
    pass = pass && std::abs(mu - std::sqrt(2.0)) <= 1e-12;
    detail += "n=" + std::to_string(n) + " ortho=" + fmt(ortho) +
              " rt=" + fmt(max_round_trip) + " mu-sqrt2=" + fmt(mu - std::sqrt(2.0)) +
              "; ";
  }
  report(1, "DCT orthonormality, round trip, coherence", pass, detail);
}

// ---------------------------------------------------------------- 2
void criterion_exact_recovery() {
  auto basis = std::make_shared<const DctBasis>(64);
  SolverConfig cfg;
  cfg.eq_tolerance = 1e-8;
  cfg.max_iterations = 20000;
  int hits = 0;
  for (int seed = 0; seed < 100; ++seed) {
    const auto instance = testing::make_planted(
        basis, 32, 5, substream_seed(2, "acc-planted", seed));
    try {
      const RecoveryResult result = solve_basis_pursuit(instance.op, instance.y, cfg);
      if ((result.alpha - instance.alpha_star).lpNorm<Eigen::Infinity>() < 1e-5) {
        ++hits;
      }
    } catch (const ConvergenceError&) {
    }
  }
  report(2, "exact recovery of planted 5-sparse signals (n=64, m=32)", hits >= 95,
         std::to_string(hits) + "/100 recovered below 1e-5");
}

// ---------------------------------------------------------------- 3
void criterion_l1_l0() {
  SolverConfig cfg;
  cfg.eq_tolerance = 1e-8;
  cfg.max_iterations = 20000;
  std::map<int, std::shared_ptr<const DctBasis>> bases;
  int unique_count = 0;
  int agree = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 8 + trial % 5;       // 8..12
    const int k = 1 + trial % 2;       // 1..2
    const int m = 2 * k + 2 + trial % 3;
    auto& basis = bases[n];
    if (!basis) basis = std::make_shared<const DctBasis>(n);
    const auto instance = testing::make_planted(
        basis, std::min(m, n), k, substream_seed(3, "acc-l1l0", trial));
    const L0Result oracle = l0_oracle(instance.op, instance.y, k);
    if (oracle.minimal_support_count != 1) continue;
    ++unique_count;
    const RecoveryResult bp = solve_basis_pursuit(instance.op, instance.y, cfg);
    if ((bp.alpha - oracle.alpha).lpNorm<Eigen::Infinity>() < 1e-6) ++agree;
  }
  const double rate =
      unique_count ? static_cast<double>(agree) / unique_count : 0.0;
  report(3, "l1 matches the exhaustive l0 oracle on planted instances",
         rate >= 0.95 && unique_count >= 150,
         std::to_string(agree) + "/" + std::to_string(unique_count) +
             " unique-oracle instances agree (rate " + fmt(rate) + ")");
}

// ---------------------------------------------------------------- 4
std::vector<SpeedTrace> acceptance_traces() {
  SynthConfig cfg;  // defaults: 100 trips, ~4.9e5 samples
  cfg.rng_seed = 1;
  return generate_synthetic_traces(cfg);
}

void criterion_ratio_trend(const std::vector<SpeedTrace>& traces) {
  SolverConfig cfg;
  cfg.jobs = 2;
  const std::vector<double> ratios = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6};
  std::vector<double> rmse;
  std::string detail;
  for (const double ratio : ratios) {
    RmseAccumulator acc;
    for (const auto& trace : traces) {
      const CompressedTrace ct =
          compress_trace(trace, 200, ratio, SamplingMode::kBernoulli, 42);
      const TraceRecovery rec = recover_trace(ct, cfg);
      acc.add(trace.speeds, rec.trace.speeds);
    }
    rmse.push_back(acc.value());
    detail += fmt(ratio) + ":" + fmt(rmse.back()) + " ";
  }
  bool monotone = true;
  for (std::size_t i = 1; i < rmse.size(); ++i) {
    monotone = monotone && rmse[i] <= rmse[i - 1];
  }
  const bool pass = monotone && rmse.back() < 0.01 && rmse[1] <= 0.10;
  report(4, "global RMSE non-increasing in ratio; 0.6 < 0.01; 0.2 <= 0.10", pass,
         detail);
}

// ---------------------------------------------------------------- 5
void criterion_timing() {
  SynthConfig scfg;
  scfg.num_trips = 4;
  scfg.duration_min_s = 700.0;
  scfg.duration_max_s = 1000.0;
  scfg.rng_seed = 14;
  const auto traces = generate_synthetic_traces(scfg);

  auto mean_block_time = [&](std::uint32_t n) {
    SolverConfig cfg;  // defaults, serial timing per block
    double total = 0.0;
    std::size_t count = 0;
    for (const auto& trace : traces) {
      const CompressedTrace ct =
          compress_trace(trace, n, 0.6, SamplingMode::kBernoulli, 15);
      const TraceRecovery rec = recover_trace(ct, cfg);
      for (const auto& block : rec.blocks) {
        if (block.status == BlockStatus::kZeroRetention) continue;
        total += block.result.wall_time_s;
        ++count;
      }
    }
    return count ? total / static_cast<double>(count) : 0.0;
  };

  const double t1000 = mean_block_time(1000);
  const double t200 = mean_block_time(200);
  const double t100 = mean_block_time(100);
  const bool pass = t1000 < 1.5 && t200 < 0.05 && t100 < 0.05;
  report(5, "recovery time envelope at ratio 0.6", pass,
         "n=1000: " + fmt(t1000) + " s/block (bound 1.5); n=200: " + fmt(t200) +
             " s; n=100: " + fmt(t100) + " s (bound 0.05)");
}

// ---------------------------------------------------------------- 6
void criterion_acceleration_bins() {
  SynthConfig scfg;
  scfg.num_trips = 30;
  scfg.duration_min_s = 200.0;
  scfg.duration_max_s = 400.0;
  scfg.smooth_fraction = 0.75;
  scfg.rng_seed = 16;
  const auto traces = generate_synthetic_traces(scfg);

  SolverConfig cfg;
  cfg.jobs = 2;
  std::vector<SpeedTrace> recovered;
  recovered.reserve(traces.size());
  for (const auto& trace : traces) {
    const CompressedTrace ct =
        compress_trace(trace, 200, 0.2, SamplingMode::kBernoulli, 17);
    recovered.push_back(recover_trace(ct, cfg).trace);
  }

  const BinnedErrorReport by_accel = bin_by_acceleration(traces, recovered, 0.1);
  double smooth_max = -1.0;
  double sharp_min = std::numeric_limits<double>::infinity();
  std::uint64_t sharp_samples = 0;
  for (const auto& bin : by_accel.bins) {
    if (bin.sample_count == 0 || std::isnan(bin.rmse)) continue;
    const bool smooth_bin =
        (bin.lower == -0.1 && bin.upper == 0.0) ||
        (bin.lower == 0.0 && bin.upper == 0.1);
    const bool sharp_bin = bin.lower >= 0.3 - 1e-12 || bin.upper <= -0.3 + 1e-12;
    if (smooth_bin) smooth_max = std::max(smooth_max, bin.rmse);
    if (sharp_bin) {
      sharp_min = std::min(sharp_min, bin.rmse);
      sharp_samples += bin.sample_count;
    }
  }
  const bool pass =
      smooth_max >= 0.0 && sharp_samples > 500 && sharp_min > smooth_max;
  report(6, "per-bin RMSE: |a| >= 0.3 bins exceed the smooth bins", pass,
         "smooth max " + fmt(smooth_max) + ", sharp min " + fmt(sharp_min) + " over " +
             std::to_string(sharp_samples) + " sharp samples");
}

// ---------------------------------------------------------------- 7
void criterion_time_of_day() {
  struct Period {
    int hour;
    double mean;
    double stddev;
    std::uint64_t seed;
  };
  const std::vector<Period> periods = {
      {1, 10.0, 6.0, 31},  {4, 8.0, 4.0, 32},   {7, 6.0, 2.2, 33},
      {10, 12.0, 7.0, 34}, {13, 14.0, 9.5, 35}, {16, 15.0, 10.5, 36},
      {19, 16.0, 10.0, 37}, {22, 11.0, 6.5, 38},
  };
  std::vector<SpeedTrace> traces;
  for (const auto& period : periods) {
    SynthConfig cfg;
    cfg.num_trips = 3;
    cfg.duration_min_s = 150.0;
    cfg.duration_max_s = 250.0;
    cfg.target_mean_mps = period.mean;
    cfg.target_std_mps = period.stddev;
    cfg.rng_seed = period.seed;
    auto generated = generate_synthetic_traces(cfg);
    for (std::size_t i = 0; i < generated.size(); ++i) {
      generated[i].start_time =
          1364774400.0 + period.hour * 3600.0 + 600.0 * static_cast<double>(i);
      generated[i].device_id = "p" + std::to_string(period.hour);
      generated[i].trip_id = generated[i].device_id + "#" + std::to_string(i);
      traces.push_back(std::move(generated[i]));
    }
  }

  SolverConfig cfg;
  cfg.jobs = 2;
  std::vector<SpeedTrace> recovered;
  recovered.reserve(traces.size());
  for (const auto& trace : traces) {
    const CompressedTrace ct =
        compress_trace(trace, 200, 0.2, SamplingMode::kBernoulli, 19);
    recovered.push_back(recover_trace(ct, cfg).trace);
  }

  const BinnedErrorReport by_time = bin_by_time_of_day(traces, recovered);
  std::vector<double> stds;
  std::vector<double> rmses;
  for (const auto& bin : by_time.bins) {
    if (bin.sample_count == 0 || std::isnan(bin.rmse)) continue;
    stds.push_back(bin.std_speed);
    rmses.push_back(bin.rmse);
  }
  const double rho = testing::spearman_correlation(stds, rmses);
  report(7, "rank correlation between per-period speed std and RMSE is positive",
         stds.size() >= 6 && rho > 0.0,
         "spearman rho " + fmt(rho) + " over " + std::to_string(stds.size()) +
             " populated bins");
}

// ---------------------------------------------------------------- 8
void criterion_sampler_stats() {
  // Retained fraction over 10^6 Bernoulli draws.
  SpeedTrace big;
  big.trip_id = "big#0";
  big.device_id = "big";
  Rng rng(8);
  big.speeds.resize(1000000);
  for (auto& v : big.speeds) v = rng.uniform(0.0, 30.0);
  const CompressedTrace ct =
      compress_trace(big, 200, 0.2, SamplingMode::kBernoulli, 80);
  const double fraction = retained_fraction(ct);
  const bool fraction_ok = std::abs(fraction - 0.2) <= 0.003;

  // 4967-sample trip, per-sample rule across the whole trip (single block),
  // mean retained count over 1000 seeds within 1% of the 993 anchor.
  SpeedTrace trip;
  trip.trip_id = "cv2300#0";
  trip.device_id = "cv2300";
  trip.speeds.assign(4967, 10.0);
  double total = 0.0;
  for (int seed = 0; seed < 1000; ++seed) {
    const CompressedTrace c =
        compress_trace(trip, 4967, 0.2, SamplingMode::kBernoulli, seed);
    total += static_cast<double>(c.blocks.at(0).retained_indices.size());
  }
  const double mean_count = total / 1000.0;
  const bool anchor_ok = std::abs(mean_count - 993.0) <= 0.01 * 993.0;

  report(8, "Bernoulli sampler statistics", fraction_ok && anchor_ok,
         "fraction " + fmt(fraction) + " (0.2 +- 0.003); mean retained " +
             fmt(mean_count) + " of 4967 (993 +- 1%)");
}

// ---------------------------------------------------------------- 9
int run_cli(const std::string& args) {
  const std::string cmd = std::string(CSCODEC_CLI_PATH) + " " + args +
                          " >/dev/null 2>/dev/null";
  const int status = std::system(cmd.c_str());
  if (status == -1) return -1;
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

double parse_global_rmse(const std::filesystem::path& eval_csv) {
  std::ifstream in(eval_csv);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("global,,", 0) == 0) {
      const std::size_t start = std::string("global,,").size();
      return std::strtod(line.c_str() + start, nullptr);
    }
  }
  return std::numeric_limits<double>::quiet_NaN();
}

void criterion_pipeline() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "cscodec_acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const auto p = [&](const char* name) { return (dir / name).string(); };

  bool pass = true;
  std::string detail;

  pass = pass && run_cli("synth -o " + p("traces.csv") +
                         " --trips 5 --duration-min 60 --duration-max 120 --seed 7") == 0;
  pass = pass && run_cli("compress " + p("traces.csv") + " -o " + p("comp.csb") +
                         " --n 200 --ratio 0.2 --mode bernoulli --seed 11") == 0;
  pass = pass && run_cli("recover " + p("comp.csb") + " -o " + p("recovered.csv") +
                         " --jobs 2") == 0;
  pass = pass && run_cli("evaluate --original " + p("traces.csv") + " --recovered " +
                         p("recovered.csv") + " -o " + p("eval.csv")) == 0;
  if (!pass) {
    report(9, "CLI pipeline matches the in-process pipeline", false,
           "a CLI stage exited nonzero");
    return;
  }

  const double cli_rmse = parse_global_rmse(dir / "eval.csv");

  // Same pipeline, in process.
  SynthConfig scfg;
  scfg.num_trips = 5;
  scfg.duration_min_s = 60.0;
  scfg.duration_max_s = 120.0;
  scfg.rng_seed = 7;
  const auto traces = generate_synthetic_traces(scfg);
  SolverConfig cfg;
  RmseAccumulator acc;
  for (const auto& trace : traces) {
    const CompressedTrace ct =
        compress_trace(trace, 200, 0.2, SamplingMode::kBernoulli, 11);
    const TraceRecovery rec = recover_trace(ct, cfg);
    acc.add(trace.speeds, rec.trace.speeds);
  }
  const double inproc_rmse = acc.value();
  const bool rmse_match = std::abs(cli_rmse - inproc_rmse) <= 1e-12;
  detail += "cli rmse " + fmt(cli_rmse) + " vs in-process " + fmt(inproc_rmse) +
            " (diff " + fmt(std::abs(cli_rmse - inproc_rmse)) + ")";

  // Manifest reruns reproduce outputs byte for byte.
  bool rerun_ok = true;
  rerun_ok = rerun_ok && run_cli("rerun " + p("traces.csv.manifest") + " -o " +
                                 p("traces2.csv")) == 0;
  rerun_ok = rerun_ok && slurp(dir / "traces.csv") == slurp(dir / "traces2.csv");
  rerun_ok = rerun_ok &&
             run_cli("rerun " + p("comp.csb.manifest") + " -o " + p("comp2.csb")) == 0;
  rerun_ok = rerun_ok && slurp(dir / "comp.csb") == slurp(dir / "comp2.csb");
  rerun_ok = rerun_ok && run_cli("rerun " + p("recovered.csv.manifest") + " -o " +
                                 p("recovered2.csv")) == 0;
  rerun_ok =
      rerun_ok && slurp(dir / "recovered.csv") == slurp(dir / "recovered2.csv");
  detail += rerun_ok ? "; reruns byte-identical" : "; rerun outputs differ";

  report(9, "CLI pipeline matches the in-process pipeline", rmse_match && rerun_ok,
         detail);
}

}  // namespace

int main() {
  std::printf("cscodec acceptance suite\n");
  criterion_dct();
  criterion_exact_recovery();
  criterion_l1_l0();
  const auto traces = acceptance_traces();
  criterion_ratio_trend(traces);
  criterion_timing();
  criterion_acceleration_bins();
  criterion_time_of_day();
  criterion_sampler_stats();
  criterion_pipeline();
  if (g_failures == 0) {
    std::printf("all criteria passed\n");
    return 0;
  }
  std::printf("%d criterion(s) failed\n", g_failures);
  return 1;
}
