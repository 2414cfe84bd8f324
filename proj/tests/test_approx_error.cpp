// Copyright 2026 The invflow Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cmath>

#include "invflow/approx_error.hpp"
#include "invflow/error.hpp"
#include "invflow/numerics.hpp"
#include "invflow/polytopic.hpp"
#include "test_util.hpp"

namespace invflow {
namespace {

const Matrix kOne{{1.0}};

TEST(MinDet, SaturatedRunningVertex) {
  const auto r = min_det_invariant(Matrix{{-0.6}}, kOne);
  EXPECT_NEAR(r.Q(0, 0), 1.0 / 0.36, 1e-6);
  EXPECT_NEAR(r.alpha, 0.6, 1e-4);
  EXPECT_NEAR(r.det_Q, 1.0 / 0.36, 1e-6);
  EXPECT_LE(r.boundary_residual, 1e-8);
  EXPECT_FALSE(r.boundary_candidate);
}

TEST(MinDet, UnsaturatedRunningVertex) {
  const auto r = min_det_invariant(Matrix{{-2.0}}, kOne);
  EXPECT_NEAR(r.Q(0, 0), 0.25, 1e-8);
  EXPECT_NEAR(r.alpha, 2.0, 1e-4);
}

TEST(MinDet, UnstableVertex) {
  try {
    min_det_invariant(kOne, kOne);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnstableVertex);
  }
}

// Scalar closed form: Q(alpha) = 1 / (alpha (2|a| - alpha) r).
TEST(MinDet, ScalarClosedFormAndLocalOptimality) {
  for (double a : {-0.3, -0.6, -1.0, -2.5}) {
    for (double r : {0.5, 1.0, 3.0}) {
      const auto res = min_det_invariant(Matrix{{a}}, Matrix{{r}});
      const double best = 1.0 / (a * a * r);
      EXPECT_NEAR(res.alpha, -a, 1e-4);
      EXPECT_NEAR(res.det_Q, best, 1e-7 * best);
      auto q_at = [&](double alpha) { return 1.0 / (alpha * (-2.0 * a - alpha) * r); };
      EXPECT_GE(q_at(res.alpha + 1e-4), res.det_Q);
      EXPECT_GE(q_at(res.alpha - 1e-4), res.det_Q);
    }
  }
}

TEST(MinDet, StrictFeasibilityJustOutside) {
  std::mt19937_64 rng(51);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 1 + trial % 3;
    const Matrix A = testing::random_stable(rng, n);
    const Matrix R_w = testing::random_pd(rng, n, 0.5);
    const auto res = min_det_invariant(A, R_w);
    EXPECT_TRUE(is_positive_definite(res.Q));
    EXPECT_LE(res.boundary_residual, 1e-8 * (1.0 + max_abs(res.Q)));
    EXPECT_EQ(res.boundary_candidate, n > 1);
    constexpr double delta = 1e-6;
    const Matrix M = Mj_matrix((1.0 + delta) * res.Q, A, res.alpha, R_w);
    EXPECT_LT(lambda_max(M), 0.0);
  }
}

TEST(MinDet, SlowerDynamicsNeedLargerSets) {
  for (double c : {0.2, 0.5, 0.9}) {
    const auto fast = min_det_invariant(Matrix{{-2.0}}, kOne);
    const auto slow = min_det_invariant(Matrix{{-2.0 * c}}, kOne);
    EXPECT_GE(slow.det_Q, fast.det_Q);
  }
}

TEST(ApproximationError, Examples) {
  // det(Q_over^{-1}) = 1, det(Q_under^{-1}) = 0.36.
  EXPECT_NEAR(approximation_error(Matrix{{1.0 / 0.36}}, kOne), 0.64 / 0.36, 1e-12);
  EXPECT_NEAR(approximation_error(Matrix{{1.0 / 0.36}}, kOne), 1.7778, 1e-4);
  EXPECT_EQ(approximation_error(Matrix::identity(2), Matrix::identity(2)), 0.0);
  EXPECT_NEAR(approximation_error(Matrix{{2.0}}, kOne), 1.0, 1e-15);
}

TEST(ApproximationError, AgainstTarget) {
  EXPECT_NEAR(error_vs_target(kOne, Matrix{{1.0 / 0.36}}), 1.7778, 1e-3);
}

TEST(ApproximationError, NoSaturationGap) {
  const Matrix H{{0.5}, {0.5}};
  const auto emb = enumerate_embedding(1.0, H, Vector{1.0, 1.0}, Network{Matrix{{1.0, 1.0}}});
  const auto under = min_det_invariant(emb.unsaturated(), kOne);
  const auto over = min_det_invariant(emb.fully_saturated(), kOne);
  EXPECT_EQ(approximation_error(under.Q, over.Q), 0.0);
}

}  // namespace
}  // namespace invflow
