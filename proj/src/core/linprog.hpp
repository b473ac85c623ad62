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

#ifndef CSCODEC_CORE_LINPROG_HPP_
#define CSCODEC_CORE_LINPROG_HPP_

#include <Eigen/Dense>

namespace cscodec {

struct LpResult {
  Eigen::VectorXd x;
  int iterations = 0;
  bool converged = false;
  double primal_infeasibility = 0.0;  // ||Ax - b|| / (1 + ||b||)
  double duality_gap = 0.0;           // x^T s / num_vars
};

// Mehrotra predictor-corrector interior point method for
//   min c^T x  s.t.  A x = b,  x >= 0
// with dense A of full row rank. Stops when primal/dual residuals and the
// complementarity gap all drop below `tol`.
LpResult solve_lp_standard_form(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                                const Eigen::VectorXd& c, double tol = 1e-10,
                                int max_iterations = 200);

}  // namespace cscodec

#endif  // CSCODEC_CORE_LINPROG_HPP_
