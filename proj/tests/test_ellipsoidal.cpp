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

#include "invflow/ellipsoidal.hpp"
#include "invflow/numerics.hpp"
#include "invflow/simulate.hpp"
#include "invflow/stabilizability.hpp"
#include "test_util.hpp"

namespace invflow {
namespace {

const Matrix kOne{{1.0}};
const Matrix kHalf{{0.5}};
const Matrix kRunningH{{0.5}, {0.5}};

TEST(Quartic, Examples) {
  const Vector two{2.0};
  const Vector zero{0.0};
  const Vector one{1.0};
  EXPECT_TRUE(quartic_condition(two, kOne, kOne, 1.0));
  EXPECT_FALSE(quartic_condition(zero, kOne, kOne, 1.0));
  EXPECT_FALSE(quartic_condition(one, kOne, kOne, 1.0));
}

TEST(GainBounds, RunningExample) {
  const auto c = gain_bounds(kOne, kOne, kHalf, 2.0);
  EXPECT_DOUBLE_EQ(c.k_min_sq, 1.0);
  EXPECT_DOUBLE_EQ(c.k, 1.0);
  EXPECT_DOUBLE_EQ(c.xi_max, 2.0);
  EXPECT_TRUE(c.linear_ok);
  EXPECT_TRUE(c.saturated_ok);

  EXPECT_FALSE(gain_bounds(kOne, kOne, kHalf, 3.0).linear_ok);
}

TEST(GainBounds, ThresholdIsExact) {
  EXPECT_TRUE(gain_bounds(kOne, kOne, kHalf, 2.0 - 1e-9).linear_ok);
  EXPECT_FALSE(gain_bounds(kOne, kOne, kHalf, 2.0 + 1e-9).linear_ok);
}

TEST(GainBounds, PEqualsRwIsBoundaryAdmissible) {
  std::mt19937_64 rng(31);
  const Matrix P = testing::random_pd(rng, 3);
  const auto c = gain_bounds(P, P, testing::random_pd(rng, 3), 1.0, 1.0);
  EXPECT_NEAR(c.k_min_sq, 1.0, 1e-12);
  EXPECT_TRUE(c.saturated_ok);
}

TEST(GainBounds, LinearImpliesSaturated) {
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + trial % 3;
    const double k = 0.2 + 0.02 * trial;
    const auto c = gain_bounds(testing::random_pd(rng, n), testing::random_pd(rng, n),
                               testing::random_pd(rng, n), 1.0 + trial % 7, k);
    EXPECT_GT(c.xi_max, 0.0);
    if (c.linear_ok) EXPECT_TRUE(c.saturated_ok);
  }
}

TEST(SaturatedControl, Examples) {
  const Matrix R_u = Matrix::identity(2);
  const Vector zero{0.0};
  EXPECT_EQ(saturated_control(zero, 1.0, kRunningH, R_u), (Vector{0.0, 0.0}));

  const Vector one{1.0};
  const Vector lin = saturated_control(one, 1.0, kRunningH, R_u);
  EXPECT_DOUBLE_EQ(lin[0], -0.5);
  EXPECT_DOUBLE_EQ(lin[1], -0.5);

  const Vector ten{10.0};
  const Vector sat = saturated_control(ten, 1.0, kRunningH, R_u);
  EXPECT_NEAR(sat[0], -5.0 / std::sqrt(50.0), 1e-15);
  EXPECT_NEAR(sat[1], -5.0 / std::sqrt(50.0), 1e-15);
  EXPECT_NEAR(quad_form(R_u, sat), 1.0, 1e-15);
}

TEST(SaturatedControl, FeasibleAndContinuous) {
  std::mt19937_64 rng(33);
  std::normal_distribution<double> gauss;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + trial % 2;
    const std::size_t m = n + 1 + trial % 2;
    const Matrix R_u = testing::random_pd(rng, m);
    const GainData g = compute_gains(Network{testing::random_network(rng, n, m)}, R_u);
    const double k = 0.5 + 0.05 * trial;
    Vector d(n);
    for (auto& v : d) v = gauss(rng);
    for (double scale : {0.01, 0.3, 1.0, 3.0, 100.0}) {
      const Vector u = saturated_control(scaled(d, scale), k, g.H, R_u);
      EXPECT_LE(quad_form(R_u, u), 1.0 + 1e-12);
    }
    // The ray crosses the boundary of X where k^2 x^T Phi x = 1.
    const double crossing = 1.0 / (k * std::sqrt(quad_form(g.Phi, d)));
    const Vector inside = saturated_control(scaled(d, crossing * (1 - 1e-12)), k, g.H, R_u);
    const Vector outside = saturated_control(scaled(d, crossing * (1 + 1e-12)), k, g.H, R_u);
    EXPECT_LE(norm2(subtract(inside, outside)), 1e-9);
  }
}

TEST(RemarkLmi, Examples) {
  EXPECT_TRUE(remark_lmi(kOne, kOne, 1.0));
  EXPECT_FALSE(remark_lmi(kOne, kOne, 0.4));
  std::mt19937_64 rng(34);
  const Matrix R_w = testing::random_pd(rng, 2);
  EXPECT_TRUE(remark_lmi(2.0 * R_w, R_w, 1.5));
}

TEST(ContainsPiR, Examples) {
  EXPECT_TRUE(contains_PiR(kOne, kOne, 2.0));
  EXPECT_FALSE(contains_PiR(Matrix{{4.0}}, kOne, 1.0));
  std::mt19937_64 rng(35);
  const Matrix P = testing::random_pd(rng, 3);
  const Matrix R_w = testing::random_pd(rng, 3);
  const double k_min_sq = pencil_max_eig(P, R_w).lambda;
  EXPECT_TRUE(contains_PiR(P, R_w, std::sqrt(k_min_sq)));
}

TEST(BoundaryEquivalence, QuarticHoldsOutsideTarget) {
  std::mt19937_64 rng(36);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> level(1.0, 100.0);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 1 + trial % 3;
    const Matrix P = testing::random_pd(rng, n);
    const Matrix R_w = testing::random_pd(rng, n);
    const auto pencil = pencil_max_eig(P, R_w);
    const double k_ok = std::sqrt(pencil.lambda * (1 + 1e-9));
    for (int s = 0; s < 1000; ++s) {
      Vector x(n);
      for (auto& v : x) v = gauss(rng);
      double target = level(rng);
      if (target <= 1.0) target = 1.0 + 1e-6;
      x = scaled(x, std::sqrt(target / quad_form(P, x)));
      EXPECT_TRUE(quartic_condition(x, P, R_w, k_ok));
    }
    // Below the bound the max-pencil direction on the boundary violates it.
    const double k_low = std::sqrt(pencil.lambda * (1 - 1e-3));
    const Vector x = scaled(pencil.vector, 1.0 / std::sqrt(quad_form(P, pencil.vector)));
    EXPECT_LT(k_low * k_low - quad_form(p_rwinv_p(P, R_w), x), 0.0);
  }
}

// V' = 2 x^T P (B u - w) with the worst demand, sampled outside the target.
TEST(Theorem4, LyapunovDecreaseOutsideTarget) {
  std::mt19937_64 rng(37);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> level(1.0 + 1e-6, 100.0);
  int certified = 0;
  for (int trial = 0; trial < 200 && certified < 25; ++trial) {
    const std::size_t n = 1 + trial % 2;
    const std::size_t m = n + 1;
    const Matrix B = testing::random_network(rng, n, m);
    const Matrix R_u = testing::random_pd(rng, m, 0.5);
    const Matrix R_w = 4.0 * testing::random_pd(rng, n, 0.5);
    const Matrix P = testing::random_pd(rng, n, 0.5);
    const GainData g = compute_gains(Network{B}, R_u);
    const double k_min_sq = pencil_max_eig(P, R_w).lambda;
    const auto c = gain_bounds(P, R_w, g.Phi, 1.0, std::sqrt(k_min_sq * 1.01));
    if (!(c.saturated_ok && c.target_in_linear_region)) continue;
    ++certified;
    for (int s = 0; s < 200; ++s) {
      Vector x(n);
      for (auto& v : x) v = gauss(rng);
      x = scaled(x, std::sqrt(level(rng) / quad_form(P, x)));
      const Vector u = saturated_control(x, c.k, g.H, R_u);
      const Vector w = worst_demand(x, P, R_w);
      const Vector xdot = subtract(B * u, w);
      EXPECT_LT(2.0 * dot(P * x, xdot), 0.0);
    }
  }
  EXPECT_GE(certified, 10);
}

}  // namespace
}  // namespace invflow
