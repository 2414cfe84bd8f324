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

#include <atomic>
#include <stdexcept>

#include "invflow/error.hpp"
#include "invflow/numerics.hpp"
#include "invflow/parallel.hpp"
#include "invflow/polytopic.hpp"
#include "invflow/stabilizability.hpp"
#include "test_util.hpp"

namespace invflow {
namespace {

TEST(Parallel, ForEachVisitsEveryIndexOnce) {
  for (Exec exec : {Exec::Serial, Exec::OpenMP}) {
    std::vector<int> hits(1000, 0);
    for_each_index(hits.size(), [&](std::size_t i) { hits[i] += 1; }, exec);
    for (int h : hits) EXPECT_EQ(h, 1);
  }
}

TEST(Parallel, MaxOverEmptyAndNonEmpty) {
  EXPECT_EQ(max_over(0, [](std::size_t) { return 1.0; }, Exec::OpenMP),
            -std::numeric_limits<double>::infinity());
  const double best = max_over(
      1001, [](std::size_t i) { return -std::abs(static_cast<double>(i) - 500.0); }, Exec::OpenMP);
  EXPECT_EQ(best, 0.0);
}

TEST(Parallel, ExceptionsPropagateFromWorkers) {
  auto body = [](std::size_t i) {
    if (i == 37) throw Error(ErrorCode::Singular, "worker failure");
  };
  for (Exec exec : {Exec::Serial, Exec::OpenMP}) {
    try {
      for_each_index(100, body, exec);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::Singular);
    }
  }
}

TEST(Parallel, OracleMatchesSerial) {
  std::mt19937_64 rng(71);
  const Network net{testing::random_network(rng, 2, 4)};
  const Matrix R_u = testing::random_pd(rng, 4);
  const Matrix R_w = testing::random_pd(rng, 2);
  EXPECT_EQ(oracle_minmax(net, R_u, R_w, 2000, Exec::Serial),
            oracle_minmax(net, R_u, R_w, 2000, Exec::OpenMP));
}

TEST(Parallel, VertexKernelsMatchSerial) {
  std::mt19937_64 rng(72);
  const Network net{testing::random_network(rng, 2, 6)};
  const Matrix H = compute_gains(net, Matrix::identity(6)).H;
  const auto emb = enumerate_embedding(1.0, H, Vector{0.5, 0.6, 0.7, 0.4, 0.9, 0.3}, net);
  const Matrix Q = testing::random_pd(rng, 2);
  const Matrix R_w = testing::random_pd(rng, 2);
  const Matrix rw_inv = inverse(R_w);
  for (double alpha : {0.1, 0.7, 3.0}) {
    EXPECT_EQ(vertex_max_eig(Q, emb, alpha, rw_inv, Exec::Serial),
              vertex_max_eig(Q, emb, alpha, rw_inv, Exec::OpenMP));
  }
  const auto a = check_theorem6(Q, emb, R_w, kVerdictTol, Exec::Serial);
  const auto b = check_theorem6(Q, emb, R_w, kVerdictTol, Exec::OpenMP);
  EXPECT_EQ(a.alpha_star, b.alpha_star);
  EXPECT_EQ(a.worst_eig, b.worst_eig);

  BoxControl box{Vector(6, -1.0), Vector(6, 1.0)};
  const auto s = theorem5_sampled_check(emb, box, Q, R_w, 0.7, 3000, 4, Exec::Serial);
  const auto p = theorem5_sampled_check(emb, box, Q, R_w, 0.7, 3000, 4, Exec::OpenMP);
  EXPECT_EQ(s.total, p.total);
  EXPECT_EQ(s.unclassified, p.unclassified);
  for (std::size_t j = 0; j < s.regions.size(); ++j) {
    EXPECT_EQ(s.regions[j].samples, p.regions[j].samples);
    EXPECT_EQ(s.regions[j].in_span, p.regions[j].in_span);
  }
}

}  // namespace
}  // namespace invflow
