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

#include "core/recovery.hpp"

#include <doctest.h>

#include <sstream>

#include "core/ingestion.hpp"
#include "core/rng.hpp"
#include "core/sampler.hpp"
#include "core/serialization.hpp"
#include "core/metrics.hpp"
#include "test_support.hpp"

using namespace cscodec;
using cscodec::testing::make_planted;

namespace {

SolverConfig tight_config() {
  SolverConfig cfg;
  cfg.eq_tolerance = 1e-8;
  cfg.max_iterations = 20000;
  return cfg;
}

}  // namespace

TEST_CASE("measurement operator selects basis rows") {
  auto basis = std::make_shared<const DctBasis>(32);

  std::vector<std::uint32_t> all(32);
  std::iota(all.begin(), all.end(), 0u);
  const MeasurementOperator full = build_measurement_operator(basis, all);
  CHECK((full.theta - basis->matrix()).cwiseAbs().maxCoeff() == 0.0);

  const MeasurementOperator single = build_measurement_operator(basis, {7});
  CHECK(single.m() == 1);
  CHECK((single.theta.row(0) - basis->matrix().row(7)).cwiseAbs().maxCoeff() == 0.0);

  // theta * dct_forward(x) equals x at the retained indices
  Rng rng(77);
  Eigen::VectorXd x(32);
  for (int i = 0; i < 32; ++i) x[i] = rng.uniform(-5.0, 25.0);
  const std::vector<std::uint32_t> subset = {1, 4, 9, 20, 31};
  const MeasurementOperator op = build_measurement_operator(basis, subset);
  const Eigen::VectorXd projected = op.theta * basis->forward(x);
  for (std::size_t k = 0; k < subset.size(); ++k) {
    CHECK(std::abs(projected[static_cast<Eigen::Index>(k)] - x[subset[k]]) < 1e-10);
  }

  CHECK_THROWS_AS(build_measurement_operator(basis, {1, 1}), Error);
  CHECK_THROWS_AS(build_measurement_operator(basis, {32}), Error);
}

TEST_CASE("basis pursuit with all samples reproduces the block exactly") {
  const int n = 64;
  auto basis = std::make_shared<const DctBasis>(n);
  std::vector<std::uint32_t> all(n);
  std::iota(all.begin(), all.end(), 0u);
  const MeasurementOperator op = build_measurement_operator(basis, all);

  Rng rng(5);
  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) y[i] = rng.uniform(0.0, 30.0);

  for (SolverAlgorithm algorithm :
       {SolverAlgorithm::kAdmmBp, SolverAlgorithm::kLinprogBp}) {
    SolverConfig cfg;
    cfg.algorithm = algorithm;
    const RecoveryResult result = solve_basis_pursuit(op, y, cfg);
    CHECK((result.x_hat - y).cwiseAbs().maxCoeff() < 1e-8);
    CHECK((result.alpha - basis->forward(y)).cwiseAbs().maxCoeff() < 1e-6);
    CHECK(result.residual <= cfg.eq_tolerance);
  }
}

TEST_CASE("planted 5-sparse signals are recovered from half the samples") {
  auto basis = std::make_shared<const DctBasis>(64);
  const SolverConfig cfg = tight_config();
  int hits = 0;
  for (int seed = 0; seed < 25; ++seed) {
    const auto instance =
        make_planted(basis, 32, 5, substream_seed(42, "unit-planted", seed));
    const RecoveryResult result = solve_basis_pursuit(instance.op, instance.y, cfg);
    if ((result.alpha - instance.alpha_star).lpNorm<Eigen::Infinity>() < 1e-5) {
      ++hits;
    }
    CHECK(result.residual <= cfg.eq_tolerance);
  }
  CHECK(hits >= 24);
}

TEST_CASE("recovered samples interpolate the retained measurements") {
  auto basis = std::make_shared<const DctBasis>(100);
  const auto instance = make_planted(basis, 35, 4, 2026);
  SolverConfig cfg;  // defaults
  const RecoveryResult result = solve_basis_pursuit(instance.op, instance.y, cfg);
  for (int k = 0; k < instance.op.m(); ++k) {
    const double recovered_at_k =
        result.x_hat[instance.op.retained_indices[static_cast<std::size_t>(k)]];
    CHECK(std::abs(recovered_at_k - instance.y[k]) <=
          10.0 * cfg.eq_tolerance * instance.y.norm() + 1e-12);
  }
}

TEST_CASE("l0 oracle basics") {
  auto basis = std::make_shared<const DctBasis>(12);
  const std::vector<std::uint32_t> indices = {0, 2, 3, 5, 7, 8, 10, 11};
  const MeasurementOperator op = build_measurement_operator(basis, indices);

  // y from a single atom
  Eigen::VectorXd e4 = Eigen::VectorXd::Zero(12);
  e4[4] = 1.0;
  const L0Result single = l0_oracle(op, op.theta * e4, 2);
  CHECK(single.support == std::vector<int>{4});
  CHECK((single.alpha - e4).cwiseAbs().maxCoeff() < 1e-9);

  // zero admits the empty support
  const L0Result zero = l0_oracle(op, Eigen::VectorXd::Zero(op.m()), 2);
  CHECK(zero.support.empty());
  CHECK(zero.alpha.cwiseAbs().maxCoeff() == 0.0);

  // planted pair
  Eigen::VectorXd pair = Eigen::VectorXd::Zero(12);
  pair[3] = 1.4;
  pair[9] = -0.8;
  const L0Result two = l0_oracle(op, op.theta * pair, 2);
  CHECK(two.support == std::vector<int>{3, 9});
  CHECK((two.alpha - pair).cwiseAbs().maxCoeff() < 1e-8);

  // infeasible within k_max
  Eigen::VectorXd dense = Eigen::VectorXd::Zero(12);
  dense[1] = 1;
  dense[2] = 1;
  dense[6] = 1;
  CHECK_THROWS_AS(l0_oracle(op, op.theta * dense, 2), Error);

  // guard rails
  CHECK_THROWS_AS(l0_oracle(build_measurement_operator(25, {0, 1, 2}),
                            Eigen::VectorXd::Zero(3), 2),
                  Error);
  CHECK_THROWS_AS(l0_oracle(op, Eigen::VectorXd::Zero(op.m()), 4), Error);
}

TEST_CASE("l1 and l0 agree on small planted instances") {
  // Spot check of the full acceptance property: planted K <= 2 supports with
  // m >= 2K + 2 rows; basis pursuit must match the exhaustive oracle.
  const SolverConfig cfg = tight_config();
  int unique_instances = 0;
  int agreements = 0;
  for (int trial = 0; trial < 60; ++trial) {
    Rng rng(substream_seed(7, "l1l0", trial));
    const int n = 8 + static_cast<int>(rng.below(5));  // 8..12
    const int k = 1 + static_cast<int>(rng.below(2));  // 1..2
    const int m = 2 * k + 2 + static_cast<int>(rng.below(3));
    auto basis = std::make_shared<const DctBasis>(n);
    const auto instance =
        make_planted(basis, m, k, substream_seed(7, "l1l0-inst", trial));
    const L0Result oracle = l0_oracle(instance.op, instance.y, k);
    if (oracle.minimal_support_count != 1) continue;
    ++unique_instances;
    const RecoveryResult bp = solve_basis_pursuit(instance.op, instance.y, cfg);
    if ((bp.alpha - oracle.alpha).lpNorm<Eigen::Infinity>() < 1e-6) ++agreements;
  }
  REQUIRE(unique_instances > 30);
  CHECK(static_cast<double>(agreements) >= 0.95 * unique_instances);
}

TEST_CASE("admm and linprog reach the same objective") {
  auto basis = std::make_shared<const DctBasis>(48);
  SolverConfig admm = tight_config();
  SolverConfig lp = tight_config();
  lp.algorithm = SolverAlgorithm::kLinprogBp;
  for (int trial = 0; trial < 100; ++trial) {
    Rng rng(substream_seed(13, "xcheck", trial));
    const int m = 16 + static_cast<int>(rng.below(17));  // 16..32
    std::vector<std::uint32_t> pool(48);
    std::iota(pool.begin(), pool.end(), 0u);
    for (int i = 0; i < m; ++i) {
      const auto j = i + static_cast<int>(rng.below(static_cast<std::uint64_t>(48 - i)));
      std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
    }
    std::vector<std::uint32_t> indices(pool.begin(), pool.begin() + m);
    std::sort(indices.begin(), indices.end());
    const MeasurementOperator op = build_measurement_operator(basis, indices);
    Eigen::VectorXd y(m);
    for (int i = 0; i < m; ++i) y[i] = rng.uniform(-10.0, 10.0);

    const double obj_admm = solve_basis_pursuit(op, y, admm).alpha.lpNorm<1>();
    const double obj_lp = solve_basis_pursuit(op, y, lp).alpha.lpNorm<1>();
    CHECK(std::abs(obj_admm - obj_lp) <= 1e-4 * std::max(obj_admm, obj_lp));
  }
}

TEST_CASE("normalized-columns variant still recovers") {
  auto basis = std::make_shared<const DctBasis>(64);
  const auto instance = make_planted(basis, 32, 4, 321);
  SolverConfig cfg = tight_config();
  cfg.normalize_columns = true;
  const RecoveryResult result = solve_basis_pursuit(instance.op, instance.y, cfg);
  CHECK(result.residual <= cfg.eq_tolerance);
  CHECK((result.alpha - instance.alpha_star).lpNorm<Eigen::Infinity>() < 1e-4);
}

TEST_CASE("solver error paths") {
  auto basis = std::make_shared<const DctBasis>(16);
  const MeasurementOperator empty_op = build_measurement_operator(basis, {});
  SolverConfig cfg;
  CHECK_THROWS_AS(solve_basis_pursuit(empty_op, Eigen::VectorXd(), cfg),
                  Error);

  const auto instance = make_planted(basis, 8, 2, 1);
  SolverConfig capped;
  capped.max_iterations = 2;
  capped.eq_tolerance = 1e-12;
  try {
    solve_basis_pursuit(instance.op, instance.y, capped);
    FAIL("expected ConvergenceError");
  } catch (const ConvergenceError& e) {
    CHECK(e.best().alpha.size() == 16);
    CHECK(e.best().x_hat.size() == 16);
    CHECK(e.best().iterations == 2);
  }
}

TEST_CASE("recover_trace round trips a ratio-1.0 compression") {
  const SpeedTrace trace = testing::reference_profile();
  const CompressedTrace ct =
      compress_trace(trace, 200, 1.0, SamplingMode::kBernoulli, 3);
  const TraceRecovery rec = recover_trace(ct, SolverConfig{});
  CHECK(rec.all_ok);
  REQUIRE(rec.trace.speeds.size() == trace.speeds.size());
  double max_err = 0.0;
  for (std::size_t i = 0; i < trace.speeds.size(); ++i) {
    max_err = std::max(max_err, std::abs(rec.trace.speeds[i] - trace.speeds[i]));
  }
  CHECK(max_err < 1e-8);
  CHECK(rec.trace.trip_id == trace.trip_id);
}

TEST_CASE("recover_trace on the reference profile at ratio 0.2") {
  const SpeedTrace trace = testing::reference_profile();
  const CompressedTrace ct =
      compress_trace(trace, 200, 0.2, SamplingMode::kExactM, 11);
  const TraceRecovery rec = recover_trace(ct, SolverConfig{});
  CHECK(rec.all_ok);
  const double rmse = rmse_normalized(trace.speeds, rec.trace.speeds);
  CHECK(rmse <= 0.10);
}

TEST_CASE("zero-retention blocks fall back to the preceding block mean") {
  const SpeedTrace trace = testing::reference_profile();
  CompressedTrace ct = compress_trace(trace, 100, 0.5, SamplingMode::kExactM, 21);
  REQUIRE(ct.blocks.size() == 10);
  // Empty two blocks by hand: one mid-trace, and the very first one.
  ct.blocks[4].retained_indices.clear();
  ct.blocks[4].retained_values.clear();
  ct.blocks[4].mode = SamplingMode::kBernoulli;  // exact_m forbids empty
  ct.blocks[0].retained_indices.clear();
  ct.blocks[0].retained_values.clear();
  ct.blocks[0].mode = SamplingMode::kBernoulli;

  const TraceRecovery rec = recover_trace(ct, SolverConfig{});
  CHECK(rec.blocks[0].status == BlockStatus::kZeroRetention);
  CHECK(rec.blocks[4].status == BlockStatus::kZeroRetention);
  CHECK(rec.all_ok);  // zero retention is flagged, not a failure

  // Leading gap has no predecessor: filled with zeros.
  for (int i = 0; i < 100; ++i) CHECK(rec.trace.speeds[i] == 0.0);
  // Mid gap: constant fill equal to the mean of block 3's recovery.
  double block3_mean = 0.0;
  for (int i = 300; i < 400; ++i) block3_mean += rec.trace.speeds[i];
  block3_mean /= 100.0;
  for (int i = 400; i < 500; ++i) {
    CHECK(rec.trace.speeds[i] == doctest::Approx(block3_mean).epsilon(1e-12));
  }
}

TEST_CASE("block recovery is identical for any worker count") {
  const SpeedTrace trace = testing::reference_profile();
  const CompressedTrace ct =
      compress_trace(trace, 100, 0.3, SamplingMode::kBernoulli, 17);
  SolverConfig serial;
  serial.jobs = 1;
  SolverConfig parallel;
  parallel.jobs = 4;
  const TraceRecovery a = recover_trace(ct, serial);
  const TraceRecovery b = recover_trace(ct, parallel);
  REQUIRE(a.trace.speeds.size() == b.trace.speeds.size());
  for (std::size_t i = 0; i < a.trace.speeds.size(); ++i) {
    CHECK(a.trace.speeds[i] == b.trace.speeds[i]);
  }
}

TEST_CASE("per-block convergence failures are flagged and partial output kept") {
  const SpeedTrace trace = testing::reference_profile();
  const CompressedTrace ct =
      compress_trace(trace, 200, 0.2, SamplingMode::kExactM, 11);
  SolverConfig cfg;
  cfg.max_iterations = 2;
  cfg.eq_tolerance = 1e-12;
  const TraceRecovery rec = recover_trace(ct, cfg);
  CHECK(!rec.all_ok);
  REQUIRE(rec.trace.speeds.size() == trace.speeds.size());
  bool found_failed = false;
  for (const auto& block : rec.blocks) {
    if (block.status == BlockStatus::kFailed) {
      found_failed = true;
      CHECK(!block.error.empty());
      CHECK(block.error.find(std::to_string(block.block_index)) != std::string::npos);
    }
  }
  CHECK(found_failed);
}

TEST_CASE("mean block rmse does not get worse as the ratio grows") {
  SynthConfig scfg;
  scfg.num_trips = 8;
  scfg.duration_min_s = 120.0;
  scfg.duration_max_s = 240.0;
  scfg.rng_seed = 31;
  const auto traces = generate_synthetic_traces(scfg);

  SolverConfig cfg;
  cfg.jobs = 2;
  double previous = std::numeric_limits<double>::infinity();
  for (const double ratio : {0.1, 0.2, 0.3, 0.4, 0.5, 0.6}) {
    double rmse_sum = 0.0;
    std::size_t count = 0;
    for (const auto& trace : traces) {
      const CompressedTrace ct =
          compress_trace(trace, 200, ratio, SamplingMode::kBernoulli, 1001);
      const TraceRecovery rec = recover_trace(ct, cfg);
      for (const auto& block : rec.blocks) {
        if (block.status != BlockStatus::kOk) continue;
        const std::size_t begin = static_cast<std::size_t>(block.block_index) * 200;
        const std::span<const double> orig(trace.speeds.data() + begin, 200);
        double energy = 0.0;
        for (double v : orig) energy += v * v;
        if (energy <= 0.0) continue;
        rmse_sum += rmse_normalized(
            orig, std::span<const double>(rec.trace.speeds.data() + begin, 200));
        ++count;
      }
    }
    const double mean_rmse = rmse_sum / static_cast<double>(count);
    CHECK(mean_rmse <= previous);
    previous = mean_rmse;
  }
}
