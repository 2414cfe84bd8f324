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


// Serial reference vs OpenMP for the data-parallel kernels. The second
// benchmark argument selects the execution mode (0 = serial, 1 = OpenMP).

#include <benchmark/benchmark.h>

#include <cmath>
#include <random>
#include <vector>

#include "invflow/model.hpp"
#include "invflow/parallel.hpp"
#include "invflow/polytopic.hpp"
#include "invflow/simulate.hpp"
#include "invflow/stabilizability.hpp"

namespace {

using namespace invflow;

Exec exec_of(const benchmark::State& state) {
  return state.range(1) == 0 ? Exec::Serial : Exec::OpenMP;
}

void label(benchmark::State& state) {
  state.SetLabel(state.range(1) == 0 ? "serial" : "openmp");
}

// Two buffers, four arcs, elliptic weights that are not diagonal.
Network two_buffer_network() {
  Network n;
  n.B = Matrix{{1.0, 0.0, -1.0, 0.5}, {0.0, 1.0, 1.0, -0.5}};
  return n;
}

void BM_OracleMinMax(benchmark::State& state) {
  const Network net = two_buffer_network();
  const Matrix R_u = Matrix{{2.0, 0.3, 0.0, 0.0}, {0.3, 1.0, 0.0, 0.1}, {0.0, 0.0, 1.5, 0.0},
                            {0.0, 0.1, 0.0, 1.0}};
  const Matrix R_w = Matrix{{4.0, 1.0}, {1.0, 3.0}};
  const auto grid = static_cast<std::size_t>(state.range(0));
  const Exec exec = exec_of(state);
  for (auto _ : state) {
    benchmark::DoNotOptimize(oracle_minmax(net, R_u, R_w, grid, exec));
  }
  label(state);
}
BENCHMARK(BM_OracleMinMax)->ArgsProduct({{1000, 10000}, {0, 1}})->Unit(benchmark::kMillisecond);

// m controls on three buffers gives 2^m vertices.
PolytopicEmbedding wide_embedding(std::size_t m) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  Network net;
  net.B = Matrix(3, m);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < m; ++j) net.B(i, j) = coef(rng) + (i == j ? 2.0 : 0.0);
  const GainData g = compute_gains(net, Matrix::identity(m));
  const Vector theta_lower(m, 0.5);
  return enumerate_embedding(1.0, g.H, theta_lower, net);
}

void BM_VertexMaxEig(benchmark::State& state) {
  const PolytopicEmbedding emb = wide_embedding(static_cast<std::size_t>(state.range(0)));
  const Matrix Q = Matrix{{1.0, 0.1, 0.0}, {0.1, 1.0, 0.1}, {0.0, 0.1, 1.0}};
  const Matrix rw_inv = Matrix::identity(3);
  const Exec exec = exec_of(state);
  for (auto _ : state) {
    benchmark::DoNotOptimize(vertex_max_eig(Q, emb, 0.5, rw_inv, exec));
  }
  label(state);
}
BENCHMARK(BM_VertexMaxEig)->ArgsProduct({{8, 12}, {0, 1}})->Unit(benchmark::kMicrosecond);

void BM_CheckTheorem6(benchmark::State& state) {
  const PolytopicEmbedding emb = wide_embedding(static_cast<std::size_t>(state.range(0)));
  const Matrix Q = Matrix::identity(3);
  const Matrix R_w = Matrix::identity(3);
  const Exec exec = exec_of(state);
  for (auto _ : state) {
    benchmark::DoNotOptimize(check_theorem6(Q, emb, R_w, kVerdictTol, exec));
  }
  label(state);
}
BENCHMARK(BM_CheckTheorem6)->ArgsProduct({{8, 10}, {0, 1}})->Unit(benchmark::kMillisecond);

// One buffer, box -2 <= u1 <= 3, -2 <= u2 <= 1, gain k = 2.
void BM_Theorem5Sampled(benchmark::State& state) {
  Network net;
  net.B = Matrix{{1.0, 1.0}};
  const BoxControl box{{-2.0, -2.0}, {3.0, 1.0}};
  const Matrix H = Matrix{{0.5}, {0.5}};
  const Matrix P = Matrix{{1.0}};
  const Vector theta_lower = theta_lower_bounds(2.0, H, P, 25.0, box);
  const PolytopicEmbedding emb = enumerate_embedding(2.0, H, theta_lower, net);
  const Matrix Q = Matrix{{1.0 / 0.36}};
  const Matrix R_w = Matrix{{1.0}};
  const auto samples = static_cast<std::size_t>(state.range(0));
  const Exec exec = exec_of(state);
  for (auto _ : state) {
    benchmark::DoNotOptimize(theorem5_sampled_check(emb, box, Q, R_w, 0.6, samples, 1, exec));
  }
  label(state);
}
BENCHMARK(BM_Theorem5Sampled)->ArgsProduct({{4096, 65536}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_RunBatch(benchmark::State& state) {
  Problem p;
  p.network.B = Matrix{{1.0, 0.0, -1.0}, {0.0, 1.0, 1.0}};
  p.demand.R_w = Matrix::identity(2) * 4.0;
  p.control = EllipsoidControl{Matrix::identity(3)};
  p.target.P = Matrix::identity(2);
  p = validate(std::move(p));
  const GainData g = compute_gains(p.network, Matrix::identity(3));

  std::vector<Scenario> scenarios(static_cast<std::size_t>(state.range(0)));
  for (std::size_t i = 0; i < scenarios.size(); ++i) {
    Scenario& s = scenarios[i];
    s.problem = p;
    s.law = ControlLaw::EllipsoidalSaturated;
    s.k = 1.5;
    s.H = g.H;
    s.demand.kind = DemandKind::BoundaryRandom;
    s.demand.seed = i + 1;
    const double angle = 0.1 * static_cast<double>(i);
    s.x0 = Vector{3.0 * std::cos(angle), 3.0 * std::sin(angle)};
    s.t_max = 10.0;
  }
  const Exec exec = exec_of(state);
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_batch(scenarios, exec));
  }
  label(state);
}
BENCHMARK(BM_RunBatch)->ArgsProduct({{16}, {0, 1}})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
