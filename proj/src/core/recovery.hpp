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

#ifndef CSCODEC_CORE_RECOVERY_HPP_
#define CSCODEC_CORE_RECOVERY_HPP_

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "core/error.hpp"
#include "core/transform.hpp"
#include "core/types.hpp"

namespace cscodec {

// Sensing operator for one block: the rows of the n x n DCT synthesis basis
// selected by the retained sample indices. theta * dct_forward(x) equals x
// restricted to those indices.
struct MeasurementOperator {
  std::shared_ptr<const DctBasis> basis;  // shared across blocks of equal n
  std::vector<std::uint32_t> retained_indices;
  Eigen::MatrixXd theta;  // m x n

  int n() const { return basis->size(); }
  int m() const { return static_cast<int>(retained_indices.size()); }
};

// Indices must be distinct and in [0, n); they need not be sorted.
MeasurementOperator build_measurement_operator(
    std::shared_ptr<const DctBasis> basis,
    const std::vector<std::uint32_t>& retained_indices);
MeasurementOperator build_measurement_operator(
    int n, const std::vector<std::uint32_t>& retained_indices);

enum class SolverAlgorithm {
  kAdmmBp,     // operator splitting; the pipeline workhorse
  kLinprogBp,  // LP reformulation solved by an interior point method
};

const char* to_string(SolverAlgorithm algorithm);
SolverAlgorithm solver_algorithm_from_string(const std::string& name);

struct SolverConfig {
  SolverAlgorithm algorithm = SolverAlgorithm::kAdmmBp;
  // Relative equality-constraint tolerance ||theta a - y||_2 / max(1, ||y||_2);
  // also scales the ADMM primal/dual stopping test.
  double eq_tolerance = 1e-6;
  int max_iterations = 5000;
  double admm_penalty = 1.0;    // initial rho; adapted by residual balancing
  double zero_threshold = 1e-8;  // support reporting cutoff
  // Rescale theta columns to unit l2 norm before solving and undo afterwards.
  // Off by default: the plain row-subselected basis keeps y = Dx exact.
  bool normalize_columns = false;
  int jobs = 1;  // worker threads for whole-trace recovery
};

struct RecoveryResult {
  Eigen::VectorXd alpha;
  Eigen::VectorXd x_hat;
  double residual = 0.0;  // ||theta a - y|| / max(1, ||y||)
  int iterations = 0;
  double wall_time_s = 0.0;
};

// Thrown when the iteration cap is hit before the tolerance; carries the
// best iterate so callers can keep partial output.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& message, RecoveryResult best)
      : Error(ErrorCode::kConvergence, message), best_(std::move(best)) {}

  const RecoveryResult& best() const { return best_; }

 private:
  RecoveryResult best_;
};

// min ||alpha||_1  s.t.  theta alpha = y (to eq_tolerance). x_hat is the
// inverse transform of alpha. Throws kNoMeasurements when m = 0 and
// ConvergenceError when the iteration cap is exhausted.
RecoveryResult solve_basis_pursuit(const MeasurementOperator& op,
                                   const Eigen::VectorXd& y,
                                   const SolverConfig& cfg);

// Exhaustive smallest-support solve of theta alpha = y, for validation on
// tiny instances only (n <= 24, k_max <= 3). Ties break by smaller l1 norm,
// then lexicographically smallest support.
struct L0Result {
  Eigen::VectorXd alpha;
  std::vector<int> support;
  // Feasible supports of the minimal size; > 1 means the certificate is
  // not unique.
  int minimal_support_count = 0;
};

L0Result l0_oracle(const MeasurementOperator& op, const Eigen::VectorXd& y,
                   int k_max);

enum class BlockStatus {
  kOk,
  kZeroRetention,  // no samples kept; filled with a neighbor's mean
  kFailed,         // solver did not converge; best iterate used
};

struct BlockRecovery {
  std::uint32_t block_index = 0;
  BlockStatus status = BlockStatus::kOk;
  RecoveryResult result;
  std::string error;
};

struct TraceRecovery {
  SpeedTrace trace;  // recovered samples, tail copied verbatim
  std::vector<BlockRecovery> blocks;
  bool all_ok = true;
};

// Recovers every full block independently (cfg.jobs worker threads; output
// is identical for any worker count), concatenates in block order and copies
// the tail. Zero-retention blocks are filled with the mean of the nearest
// preceding recovered block (0 if none) and flagged.
TraceRecovery recover_trace(const CompressedTrace& ct, const SolverConfig& cfg);

}  // namespace cscodec

#endif  // CSCODEC_CORE_RECOVERY_HPP_
