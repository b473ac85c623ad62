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

#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <thread>
#include <unordered_set>

#include "core/linprog.hpp"

namespace cscodec {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

double soft_threshold(double v, double kappa) {
  if (v > kappa) return v - kappa;
  if (v < -kappa) return v + kappa;
  return 0.0;
}

double relative_residual(const Eigen::MatrixXd& theta, const Eigen::VectorXd& alpha,
                         const Eigen::VectorXd& y) {
  return (theta * alpha - y).norm() / std::max(1.0, y.norm());
}

// ADMM on min ||z||_1 s.t. theta x = y, x = z. The x-update is the exact
// projection onto the constraint set, so every iterate is feasible and the
// penalty can be rescaled for free (the projection does not depend on rho).
// The solve runs on y rescaled to unit norm, which keeps the shrinkage step
// and the stopping tolerances matched to the data magnitude.
RecoveryResult solve_admm(const MeasurementOperator& op, const Eigen::MatrixXd& theta,
                          const Eigen::VectorXd& y, const SolverConfig& cfg) {
  const int n = static_cast<int>(theta.cols());

  // Rows of the orthonormal basis give theta theta^T = I exactly; the
  // factorization is only needed for the normalized-columns variant.
  const bool identity_gram = !cfg.normalize_columns;
  Eigen::LLT<Eigen::MatrixXd> gram_llt;
  if (!identity_gram) {
    Eigen::MatrixXd gram = theta * theta.transpose();
    gram.diagonal().array() += 1e-13;
    gram_llt.compute(gram);
    check(gram_llt.info() == Eigen::Success, ErrorCode::kInternal,
          "basis pursuit: theta theta^T not positive definite");
  }

  const double y_scale = std::max(y.norm(), 1e-300);
  const Eigen::VectorXd y_unit = y / y_scale;

  auto project = [&](const Eigen::VectorXd& v) -> Eigen::VectorXd {
    const Eigen::VectorXd miss = theta * v - y_unit;
    return v - theta.transpose() * (identity_gram ? miss : gram_llt.solve(miss).eval());
  };

  const double relax = 1.6;
  double rho = cfg.admm_penalty;
  // eq_tolerance anchors the absolute scale; the relative optimality test is
  // two orders looser, which is where recovery quality stops improving.
  const double eps_abs = cfg.eq_tolerance;
  const double eps_rel = 100.0 * cfg.eq_tolerance;
  const double sqrt_n = std::sqrt(static_cast<double>(n));

  Eigen::VectorXd x = project(Eigen::VectorXd::Zero(n));
  Eigen::VectorXd z = x;
  Eigen::VectorXd u = Eigen::VectorXd::Zero(n);

  int iter = 0;
  bool converged = false;
  for (; iter < cfg.max_iterations; ++iter) {
    x = project(z - u);
    const Eigen::VectorXd x_relaxed = relax * x + (1.0 - relax) * z;
    const Eigen::VectorXd z_old = z;
    const Eigen::VectorXd zu = x_relaxed + u;
    for (int j = 0; j < n; ++j) z[j] = soft_threshold(zu[j], 1.0 / rho);
    u += x_relaxed - z;

    const double r_norm = (x - z).norm();
    const double s_norm = rho * (z - z_old).norm();
    const double eps_pri =
        sqrt_n * eps_abs + eps_rel * std::max(x.norm(), z.norm());
    const double eps_dual = sqrt_n * eps_abs + eps_rel * rho * u.norm();
    if (r_norm <= eps_pri && s_norm <= eps_dual) {
      converged = true;
      ++iter;
      break;
    }
    // Residual balancing every few iterations keeps the two residuals
    // within an order of magnitude of each other.
    if (iter % 10 == 0) {
      if (r_norm > 10.0 * s_norm) {
        rho *= 2.0;
        u *= 0.5;
      } else if (s_norm > 10.0 * r_norm) {
        rho *= 0.5;
        u *= 2.0;
      }
    }
  }

  RecoveryResult result;
  result.alpha = y_scale * x;  // feasible iterate, back on the data scale
  result.iterations = iter;
  result.residual = relative_residual(theta, result.alpha, y);
  if (!converged) {
    result.x_hat = op.basis->inverse(result.alpha);
    throw ConvergenceError("basis pursuit (admm) hit the iteration cap (" +
                               std::to_string(cfg.max_iterations) + ")",
                           result);
  }
  return result;
}

RecoveryResult solve_linprog(const MeasurementOperator& op,
                             const Eigen::MatrixXd& theta, const Eigen::VectorXd& y,
                             const SolverConfig& cfg) {
  // Split alpha = p - q, p, q >= 0; minimize 1^T (p + q) s.t. theta (p - q) = y.
  const int n = static_cast<int>(theta.cols());
  Eigen::MatrixXd a(theta.rows(), 2 * n);
  a.leftCols(n) = theta;
  a.rightCols(n) = -theta;
  const Eigen::VectorXd c = Eigen::VectorXd::Ones(2 * n);

  // Interior point accuracy well below the feasibility tolerance.
  const double lp_tol = std::min(1e-10, 0.01 * cfg.eq_tolerance);
  const int lp_iters = std::min(cfg.max_iterations, 500);
  const LpResult lp = solve_lp_standard_form(a, y, c, lp_tol, lp_iters);

  RecoveryResult result;
  result.alpha = lp.x.head(n) - lp.x.tail(n);
  result.iterations = lp.iterations;
  result.residual = relative_residual(theta, result.alpha, y);
  if (!lp.converged && result.residual > cfg.eq_tolerance) {
    result.x_hat = op.basis->inverse(result.alpha);
    throw ConvergenceError("basis pursuit (linprog) did not converge", result);
  }
  return result;
}

}  // namespace

const char* to_string(SolverAlgorithm algorithm) {
  return algorithm == SolverAlgorithm::kAdmmBp ? "admm_bp" : "linprog_bp";
}

SolverAlgorithm solver_algorithm_from_string(const std::string& name) {
  if (name == "admm_bp") return SolverAlgorithm::kAdmmBp;
  if (name == "linprog_bp") return SolverAlgorithm::kLinprogBp;
  throw Error(ErrorCode::kInvalidArgument, "unknown solver '" + name + "'");
}

MeasurementOperator build_measurement_operator(
    std::shared_ptr<const DctBasis> basis,
    const std::vector<std::uint32_t>& retained_indices) {
  check(basis != nullptr, ErrorCode::kInvalidArgument,
        "build_measurement_operator: null basis");
  const auto n = static_cast<std::uint32_t>(basis->size());
  std::unordered_set<std::uint32_t> seen;
  for (std::uint32_t idx : retained_indices) {
    check(idx < n, ErrorCode::kInvalidArgument,
          "build_measurement_operator: index out of range");
    check(seen.insert(idx).second, ErrorCode::kInvalidArgument,
          "build_measurement_operator: duplicate index");
  }
  MeasurementOperator op;
  op.theta.resize(static_cast<Eigen::Index>(retained_indices.size()), basis->size());
  for (std::size_t k = 0; k < retained_indices.size(); ++k) {
    op.theta.row(static_cast<Eigen::Index>(k)) =
        basis->matrix().row(retained_indices[k]);
  }
  op.basis = std::move(basis);
  op.retained_indices = retained_indices;
  return op;
}

MeasurementOperator build_measurement_operator(
    int n, const std::vector<std::uint32_t>& retained_indices) {
  return build_measurement_operator(std::make_shared<DctBasis>(n), retained_indices);
}

RecoveryResult solve_basis_pursuit(const MeasurementOperator& op,
                                   const Eigen::VectorXd& y,
                                   const SolverConfig& cfg) {
  check(op.m() >= 1, ErrorCode::kNoMeasurements,
        "solve_basis_pursuit: no measurements");
  check(y.size() == op.m(), ErrorCode::kInvalidArgument,
        "solve_basis_pursuit: y length does not match the operator");
  check(y.allFinite(), ErrorCode::kInvalidArgument,
        "solve_basis_pursuit: y must be finite");
  check(cfg.eq_tolerance > 0.0 && cfg.max_iterations >= 1,
        ErrorCode::kInvalidArgument, "solve_basis_pursuit: bad solver config");

  const auto t0 = Clock::now();

  Eigen::VectorXd col_norms;
  const Eigen::MatrixXd* theta = &op.theta;
  Eigen::MatrixXd theta_scaled;
  if (cfg.normalize_columns) {
    col_norms = op.theta.colwise().norm().cwiseMax(1e-12);
    theta_scaled = op.theta * col_norms.cwiseInverse().asDiagonal();
    theta = &theta_scaled;
  }

  RecoveryResult result;
  try {
    result = (cfg.algorithm == SolverAlgorithm::kAdmmBp)
                 ? solve_admm(op, *theta, y, cfg)
                 : solve_linprog(op, *theta, y, cfg);
  } catch (ConvergenceError& e) {
    RecoveryResult best = e.best();
    if (cfg.normalize_columns) {
      best.alpha = best.alpha.cwiseQuotient(col_norms);
      best.x_hat = op.basis->inverse(best.alpha);
    }
    best.wall_time_s = seconds_since(t0);
    throw ConvergenceError(e.what(), std::move(best));
  }

  if (cfg.normalize_columns) {
    // Undo the column scaling: theta_scaled beta = y with beta = C alpha.
    result.alpha = result.alpha.cwiseQuotient(col_norms);
    result.residual = relative_residual(op.theta, result.alpha, y);
  }
  result.x_hat = op.basis->inverse(result.alpha);
  result.wall_time_s = seconds_since(t0);
  return result;
}

namespace {

void enumerate_supports(int n, int k, std::vector<int>& current,
                        const std::function<void(const std::vector<int>&)>& visit,
                        int first = 0) {
  if (static_cast<int>(current.size()) == k) {
    visit(current);
    return;
  }
  for (int i = first; i <= n - (k - static_cast<int>(current.size())); ++i) {
    current.push_back(i);
    enumerate_supports(n, k, current, visit, i + 1);
    current.pop_back();
  }
}

}  // namespace

L0Result l0_oracle(const MeasurementOperator& op, const Eigen::VectorXd& y,
                   int k_max) {
  const int n = op.n();
  check(n <= 24 && k_max >= 0 && k_max <= 3, ErrorCode::kInvalidArgument,
        "l0_oracle: limited to n <= 24 and k_max <= 3");
  check(y.size() == op.m(), ErrorCode::kInvalidArgument,
        "l0_oracle: y length does not match the operator");

  const double feas_tol = 1e-8 * std::max(1.0, y.norm());

  for (int k = 0; k <= k_max; ++k) {
    L0Result best;
    best.minimal_support_count = 0;
    double best_l1 = 0.0;
    std::vector<int> current;
    enumerate_supports(n, k, current, [&](const std::vector<int>& support) {
      Eigen::MatrixXd cols(op.theta.rows(), k);
      for (int j = 0; j < k; ++j) cols.col(j) = op.theta.col(support[j]);
      Eigen::VectorXd coeffs =
          (k == 0) ? Eigen::VectorXd() : cols.colPivHouseholderQr().solve(y).eval();
      const Eigen::VectorXd residual =
          (k == 0) ? y : (y - cols * coeffs).eval();
      if (residual.norm() > feas_tol) return;
      Eigen::VectorXd alpha = Eigen::VectorXd::Zero(n);
      for (int j = 0; j < k; ++j) alpha[support[j]] = coeffs[j];
      const double l1 = alpha.lpNorm<1>();
      ++best.minimal_support_count;
      // Ties: smaller l1 first; enumeration order is lexicographic, so the
      // first of equal-l1 candidates wins.
      if (best.minimal_support_count == 1 || l1 < best_l1 - 1e-12) {
        best.alpha = alpha;
        best.support = support;
        best_l1 = l1;
      }
    });
    if (best.minimal_support_count > 0) return best;
  }
  throw Error(ErrorCode::kInfeasible,
              "l0_oracle: no feasible support within k_max = " + std::to_string(k_max));
}

TraceRecovery recover_trace(const CompressedTrace& ct, const SolverConfig& cfg) {
  validate_compressed_trace(ct);

  TraceRecovery out;
  out.trace.trip_id = ct.trip_id;
  out.trace.device_id = ct.device_id;
  out.trace.start_time = ct.start_time;
  out.trace.sample_rate_hz = ct.sample_rate_hz;
  out.blocks.resize(ct.blocks.size());

  const auto basis = std::make_shared<const DctBasis>(static_cast<int>(ct.n));

  // Blocks are independent; workers pull indices from a shared counter and
  // write into preallocated slots, so the outcome does not depend on the
  // worker count.
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    while (true) {
      const std::size_t b = next.fetch_add(1);
      if (b >= ct.blocks.size()) return;
      const CompressedBlock& block = ct.blocks[b];
      BlockRecovery& slot = out.blocks[b];
      slot.block_index = block.block_index;
      if (block.retained_indices.empty()) {
        slot.status = BlockStatus::kZeroRetention;
        continue;
      }
      try {
        const MeasurementOperator op =
            build_measurement_operator(basis, block.retained_indices);
        const Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(
            block.retained_values.data(),
            static_cast<Eigen::Index>(block.retained_values.size()));
        slot.result = solve_basis_pursuit(op, y, cfg);
        slot.status = BlockStatus::kOk;
      } catch (const ConvergenceError& e) {
        slot.status = BlockStatus::kFailed;
        slot.result = e.best();
        slot.error = "block " + std::to_string(block.block_index) + ": " + e.what();
      } catch (const Error& e) {
        slot.status = BlockStatus::kFailed;
        slot.error = "block " + std::to_string(block.block_index) + ": " + e.what();
      }
    }
  };

  const int jobs = std::max(1, cfg.jobs);
  if (jobs == 1 || ct.blocks.size() <= 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    threads.reserve(static_cast<std::size_t>(jobs));
    for (int t = 0; t < jobs; ++t) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  }

  // Assemble in block order; fill gaps after recovery so the fallback mean
  // always comes from the nearest preceding block that actually solved.
  out.trace.speeds.reserve(ct.original_length());
  double last_mean = 0.0;
  bool have_mean = false;
  for (std::size_t b = 0; b < ct.blocks.size(); ++b) {
    BlockRecovery& slot = out.blocks[b];
    if (slot.status == BlockStatus::kZeroRetention) {
      const double fill = have_mean ? last_mean : 0.0;
      out.trace.speeds.insert(out.trace.speeds.end(), ct.n, fill);
      continue;
    }
    if (slot.status == BlockStatus::kFailed && slot.result.x_hat.size() == 0) {
      // No iterate at all (unexpected); hold the previous mean.
      out.all_ok = false;
      const double fill = have_mean ? last_mean : 0.0;
      out.trace.speeds.insert(out.trace.speeds.end(), ct.n, fill);
      continue;
    }
    if (slot.status == BlockStatus::kFailed) out.all_ok = false;
    const Eigen::VectorXd& x_hat = slot.result.x_hat;
    out.trace.speeds.insert(out.trace.speeds.end(), x_hat.data(),
                            x_hat.data() + x_hat.size());
    if (slot.status == BlockStatus::kOk) {
      last_mean = x_hat.mean();
      have_mean = true;
    }
  }
  out.trace.speeds.insert(out.trace.speeds.end(), ct.tail.begin(), ct.tail.end());
  return out;
}

}  // namespace cscodec
