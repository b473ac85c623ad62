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

#ifndef CSCODEC_CORE_TRANSFORM_HPP_
#define CSCODEC_CORE_TRANSFORM_HPP_

#include <Eigen/Dense>

namespace cscodec {

// Orthonormal DCT-II basis of size n. The stored matrix is the inverse
// (synthesis) transform: column j holds the j-th cosine atom, so
// x = psi * alpha and alpha = psi^T * x.
//
// Built densely once per n; callers cache and share instances (the matrix is
// immutable, so concurrent use is safe). n stays <= ~1000 in this codebase,
// which keeps the O(n^2) apply well inside budget.
class DctBasis {
 public:
  explicit DctBasis(int n);

  int size() const { return n_; }
  const Eigen::MatrixXd& matrix() const { return psi_; }

  // alpha = psi^T x. Throws on size mismatch or non-finite input.
  Eigen::VectorXd forward(const Eigen::VectorXd& x) const;

  // x = psi alpha.
  Eigen::VectorXd inverse(const Eigen::VectorXd& alpha) const;

 private:
  int n_;
  Eigen::MatrixXd psi_;
};

// Convenience one-shot transforms; build the basis on each call.
Eigen::VectorXd dct_forward(const Eigen::VectorXd& x);
Eigen::VectorXd dct_inverse(const Eigen::VectorXd& alpha);

// sqrt(N) * max |entry| of a unitary matrix. Callers must pass an
// orthonormal basis; the value is meaningless otherwise.
double coherence(const Eigen::MatrixXd& basis);

// Number of entries with |alpha_j| > rel_threshold * max|alpha|.
// rel_threshold = 0 counts exact nonzeros. Requires 0 <= rel_threshold < 1.
int sparsity_count(const Eigen::VectorXd& alpha, double rel_threshold);

}  // namespace cscodec

#endif  // CSCODEC_CORE_TRANSFORM_HPP_
