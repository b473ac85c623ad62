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

#include "core/transform.hpp"

#include <cmath>

#include "core/error.hpp"

namespace cscodec {

DctBasis::DctBasis(int n) : n_(n) {
  check(n >= 1, ErrorCode::kInvalidArgument, "DctBasis: n must be >= 1");
  psi_.resize(n, n);
  const double k0 = 1.0 / std::sqrt(static_cast<double>(n));
  const double kj = std::sqrt(2.0 / static_cast<double>(n));
  for (int j = 0; j < n; ++j) {
    const double scale = (j == 0) ? k0 : kj;
    for (int i = 0; i < n; ++i) {
      psi_(i, j) = scale * std::cos(M_PI * j * (i + 0.5) / n);
    }
  }
}

Eigen::VectorXd DctBasis::forward(const Eigen::VectorXd& x) const {
  check(x.size() == n_, ErrorCode::kInvalidArgument,
        "DctBasis::forward: input length does not match basis size");
  check(x.allFinite(), ErrorCode::kInvalidArgument,
        "DctBasis::forward: input must be finite");
  return psi_.transpose() * x;
}

Eigen::VectorXd DctBasis::inverse(const Eigen::VectorXd& alpha) const {
  check(alpha.size() == n_, ErrorCode::kInvalidArgument,
        "DctBasis::inverse: input length does not match basis size");
  check(alpha.allFinite(), ErrorCode::kInvalidArgument,
        "DctBasis::inverse: input must be finite");
  return psi_ * alpha;
}

Eigen::VectorXd dct_forward(const Eigen::VectorXd& x) {
  check(x.size() >= 1, ErrorCode::kInvalidArgument, "dct_forward: empty input");
  return DctBasis(static_cast<int>(x.size())).forward(x);
}

Eigen::VectorXd dct_inverse(const Eigen::VectorXd& alpha) {
  check(alpha.size() >= 1, ErrorCode::kInvalidArgument, "dct_inverse: empty input");
  return DctBasis(static_cast<int>(alpha.size())).inverse(alpha);
}

double coherence(const Eigen::MatrixXd& basis) {
  check(basis.rows() >= 1 && basis.rows() == basis.cols(),
        ErrorCode::kInvalidArgument, "coherence: basis must be square and nonempty");
  return std::sqrt(static_cast<double>(basis.rows())) *
         basis.cwiseAbs().maxCoeff();
}

int sparsity_count(const Eigen::VectorXd& alpha, double rel_threshold) {
  check(rel_threshold >= 0.0 && rel_threshold < 1.0, ErrorCode::kInvalidArgument,
        "sparsity_count: rel_threshold must be in [0, 1)");
  if (alpha.size() == 0) return 0;
  const double cut = rel_threshold * alpha.cwiseAbs().maxCoeff();
  int count = 0;
  for (Eigen::Index j = 0; j < alpha.size(); ++j) {
    if (std::abs(alpha[j]) > cut) ++count;
  }
  return count;
}

}  // namespace cscodec
