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

#include <doctest.h>

#include "core/error.hpp"
#include "core/rng.hpp"
#include "test_support.hpp"

using namespace cscodec;

TEST_CASE("dct of a constant vector is a pure dc coefficient") {
  const int n = 128;
  const double c = 3.75;
  const DctBasis basis(n);
  const Eigen::VectorXd alpha = basis.forward(Eigen::VectorXd::Constant(n, c));
  CHECK(alpha[0] == doctest::Approx(c * std::sqrt(n)).epsilon(1e-12));
  CHECK(alpha.tail(n - 1).cwiseAbs().maxCoeff() < 1e-10);

  const Eigen::VectorXd x = basis.inverse(alpha);
  CHECK((x.array() - c).abs().maxCoeff() < 1e-10);
}

TEST_CASE("basis columns map to unit coefficient vectors") {
  const int n = 96;
  const DctBasis basis(n);
  for (int j0 : {0, 1, 17, n - 1}) {
    const Eigen::VectorXd alpha = basis.forward(basis.matrix().col(j0));
    Eigen::VectorXd expected = Eigen::VectorXd::Zero(n);
    expected[j0] = 1.0;
    CHECK((alpha - expected).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((basis.inverse(expected) - basis.matrix().col(j0)).cwiseAbs().maxCoeff() <
          1e-12);
  }
}

TEST_CASE("orthonormality, round trips and parseval") {
  for (int n : {1, 2, 7, 100, 200}) {
    const DctBasis basis(n);
    const Eigen::MatrixXd gram =
        basis.matrix().transpose() * basis.matrix() -
        Eigen::MatrixXd::Identity(n, n);
    CHECK(gram.cwiseAbs().maxCoeff() < 1e-10);

    Rng rng(substream_seed(11, "transform", static_cast<std::uint64_t>(n)));
    for (int rep = 0; rep < 20; ++rep) {
      Eigen::VectorXd x(n);
      for (int i = 0; i < n; ++i) x[i] = rng.uniform(-30.0, 30.0);
      const Eigen::VectorXd alpha = basis.forward(x);
      CHECK((basis.inverse(alpha) - x).cwiseAbs().maxCoeff() < 1e-10);
      if (x.norm() > 0) {
        CHECK(std::abs(alpha.norm() - x.norm()) / x.norm() < 1e-9);
      }
    }
  }
}

TEST_CASE("coherence anchors") {
  CHECK(coherence(Eigen::MatrixXd::Identity(8, 8)) ==
        doctest::Approx(std::sqrt(8.0)).epsilon(1e-14));
  CHECK(coherence(Eigen::MatrixXd::Identity(1, 1)) == doctest::Approx(1.0));
  // Whenever n has an odd factor some cosine atom hits +-1 exactly, so the
  // coherence of the basis is exactly sqrt(2).
  for (int n : {3, 5, 6, 12, 100, 200, 500}) {
    CHECK(std::abs(coherence(DctBasis(n).matrix()) - std::sqrt(2.0)) < 1e-12);
  }
  // Powers of two never reach the bound; document the gap rather than hide it.
  const double c64 = coherence(DctBasis(64).matrix());
  CHECK(c64 < std::sqrt(2.0) - 1e-4);
  CHECK(c64 > 1.40);
}

TEST_CASE("sparsity_count thresholds") {
  Eigen::VectorXd a(4);
  a << 5, 0, 0, 0;
  CHECK(sparsity_count(a, 0.0) == 1);
  Eigen::VectorXd b(4);
  b << 10, 0.5, 0, 0;
  CHECK(sparsity_count(b, 0.01) == 2);
  Eigen::VectorXd c(4);
  c << 10, 0.05, 0, 0;
  CHECK(sparsity_count(c, 0.01) == 1);  // 0.05 < 0.1 cut
  CHECK_THROWS_AS(sparsity_count(b, 1.0), Error);
  CHECK_THROWS_AS(sparsity_count(b, -0.1), Error);
}

TEST_CASE("reference profile is compressible: ~50 active coefficients of 1000") {
  const SpeedTrace trace = testing::reference_profile();
  REQUIRE(trace.speeds.size() == 1000);
  const Eigen::VectorXd x =
      Eigen::Map<const Eigen::VectorXd>(trace.speeds.data(), 1000);
  const Eigen::VectorXd alpha = dct_forward(x);
  const int active = sparsity_count(alpha, 0.01);
  CHECK(active >= 25);
  CHECK(active <= 90);
}

TEST_CASE("transform error paths") {
  CHECK_THROWS_AS(DctBasis(0), Error);
  CHECK_THROWS_AS(dct_forward(Eigen::VectorXd()), Error);
  CHECK_THROWS_AS(dct_inverse(Eigen::VectorXd()), Error);
  const DctBasis basis(8);
  CHECK_THROWS_AS(basis.forward(Eigen::VectorXd::Zero(7)), Error);
  Eigen::VectorXd bad = Eigen::VectorXd::Zero(8);
  bad[3] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(basis.forward(bad), Error);
}
