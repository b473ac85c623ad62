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

#include "core/linprog.hpp"

#include <algorithm>
#include <cmath>

#include "core/error.hpp"

namespace cscodec {

namespace {

// Largest step in [0, 1] keeping x + step * dx strictly positive.
double max_step(const Eigen::VectorXd& x, const Eigen::VectorXd& dx) {
  double step = 1.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (dx[i] < 0.0) step = std::min(step, -x[i] / dx[i]);
  }
  return step;
}

}  // namespace

LpResult solve_lp_standard_form(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                                const Eigen::VectorXd& c, double tol,
                                int max_iterations) {
  const Eigen::Index m = A.rows();
  const Eigen::Index n = A.cols();
  check(m >= 1 && n >= 1, ErrorCode::kInvalidArgument, "lp: empty problem");
  check(b.size() == m && c.size() == n, ErrorCode::kInvalidArgument,
        "lp: dimension mismatch");

  // Starting point (Mehrotra): least-squares x and dual estimate, shifted
  // into the positive orthant.
  const double reg = 1e-12 * (1.0 + A.squaredNorm() / static_cast<double>(m));
  Eigen::MatrixXd aat = A * A.transpose();
  aat.diagonal().array() += reg;
  Eigen::LLT<Eigen::MatrixXd> aat_llt(aat);
  check(aat_llt.info() == Eigen::Success, ErrorCode::kInvalidArgument,
        "lp: A A^T not positive definite (rank-deficient rows?)");

  Eigen::VectorXd x = A.transpose() * aat_llt.solve(b);
  Eigen::VectorXd lambda = aat_llt.solve(A * c);
  Eigen::VectorXd s = c - A.transpose() * lambda;

  const double dx = std::max(-1.5 * x.minCoeff(), 0.0);
  const double ds = std::max(-1.5 * s.minCoeff(), 0.0);
  x.array() += dx;
  s.array() += ds;
  const double xs = x.dot(s);
  const double dxh = 0.5 * xs / std::max(s.sum(), 1e-300);
  const double dsh = 0.5 * xs / std::max(x.sum(), 1e-300);
  x.array() += dxh + 1e-10;
  s.array() += dsh + 1e-10;

  const double b_scale = 1.0 + b.lpNorm<Eigen::Infinity>();
  const double c_scale = 1.0 + c.lpNorm<Eigen::Infinity>();

  LpResult result;
  for (int iter = 0; iter < max_iterations; ++iter) {
    const Eigen::VectorXd rb = A * x - b;
    const Eigen::VectorXd rc = A.transpose() * lambda + s - c;
    const double mu = x.dot(s) / static_cast<double>(n);

    result.iterations = iter;
    result.primal_infeasibility = rb.norm() / b_scale;
    result.duality_gap = mu;
    if (result.primal_infeasibility < tol && rc.norm() / c_scale < tol && mu < tol) {
      result.converged = true;
      break;
    }

    // Normal equations A D A^T with D = diag(x / s).
    Eigen::VectorXd d = (x.array() / s.array())
                            .cwiseMax(1e-14)
                            .cwiseMin(1e14)
                            .matrix();
    Eigen::MatrixXd normal = A * d.asDiagonal() * A.transpose();
    normal.diagonal().array() += reg;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(normal);
    if (ldlt.info() != Eigen::Success) break;

    auto solve_step = [&](const Eigen::VectorXd& rxs, Eigen::VectorXd* dx_out,
                          Eigen::VectorXd* dlambda_out, Eigen::VectorXd* ds_out) {
      // Reduced system: A D A^T dlambda = -rb + A (x/s * rc... ) expressed via
      //   ds = -rc - A^T dlambda
      //   dx = -(rxs + x * ds) / s
      const Eigen::VectorXd rhs =
          -rb + A * ((rxs.array() / s.array()).matrix() - d.asDiagonal() * rc);
      *dlambda_out = ldlt.solve(rhs);
      *ds_out = -rc - A.transpose() * *dlambda_out;
      *dx_out = -((rxs.array() + x.array() * ds_out->array()) / s.array()).matrix();
    };

    // Predictor (affine scaling) direction.
    Eigen::VectorXd dx_aff, dl_aff, ds_aff;
    solve_step(x.cwiseProduct(s), &dx_aff, &dl_aff, &ds_aff);
    const double alpha_p_aff = max_step(x, dx_aff);
    const double alpha_d_aff = max_step(s, ds_aff);
    const double mu_aff = (x + alpha_p_aff * dx_aff).dot(s + alpha_d_aff * ds_aff) /
                          static_cast<double>(n);
    const double sigma = std::pow(mu_aff / std::max(mu, 1e-300), 3.0);

    // Corrector with centering.
    const Eigen::VectorXd rxs =
        (x.array() * s.array() + dx_aff.array() * ds_aff.array() - sigma * mu)
            .matrix();
    Eigen::VectorXd dxv, dlv, dsv;
    solve_step(rxs, &dxv, &dlv, &dsv);

    const double alpha_p = std::min(1.0, 0.99995 * max_step(x, dxv));
    const double alpha_d = std::min(1.0, 0.99995 * max_step(s, dsv));
    x += alpha_p * dxv;
    lambda += alpha_d * dlv;
    s += alpha_d * dsv;
    result.iterations = iter + 1;

    if (alpha_p < 1e-10 && alpha_d < 1e-10) break;  // stalled
  }

  result.x = x;
  return result;
}

}  // namespace cscodec
